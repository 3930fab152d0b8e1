#include "orlicz_lab/isotropic.hpp"

#include <algorithm>
#include <cmath>

#include "orlicz_lab/error.hpp"

namespace orlicz {

double asymptotic_isotropic_constant(const GibbsSummary& s) {
  return std::exp(s.alpha_star * s.R - s.phi) * std::sqrt(s.L2);
}

double asymptotic_volume_radius(const GibbsSummary& s) {
  return std::exp(s.phi - s.alpha_star * s.R);
}

double lp_ball_volume_exact(double p, int n, double R) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp volume requires p >= 1");
  if (n < 1) throw DomainError("lp volume requires n >= 1");
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("radius R must be positive");
  const double dn = static_cast<double>(n);
  return dn * (std::log(2.0) + std::lgamma(1.0 + 1.0 / p)) - std::lgamma(1.0 + dn / p) +
         (dn / p) * std::log(dn * R);
}

MonteCarloEstimate finite_n_isotropic_estimate(const OrliczFunction& f, double R, int n,
                                               std::uint64_t samples, std::uint64_t seed,
                                               const SamplingOptions& opts) {
  const MonteCarloEstimate v = mean_sq_norm_estimate(f, R, n, samples, seed, opts);
  double radius;
  bool approximate = false;
  if (const auto p = f.power_exponent()) {
    radius = std::exp(lp_ball_volume_exact(*p, n, R) / n);
  } else {
    radius = asymptotic_volume_radius(gibbs_summary(f, R));
    approximate = true;
  }

  MonteCarloEstimate out = v;
  const double root = std::sqrt(v.value);
  out.value = root / radius;
  out.std_error = v.std_error / (2.0 * root) / radius;
  out.ci_low = std::sqrt(std::max(0.0, v.ci_low)) / radius;
  out.ci_high = std::sqrt(std::max(0.0, v.ci_high)) / radius;
  out.approximate = v.approximate || approximate;
  return out;
}

IsotropicReport isotropic_report(const OrliczFunction& f, double R, std::span<const int> n_list,
                                 std::uint64_t samples, std::uint64_t seed,
                                 const SamplingOptions& opts) {
  const GibbsSummary s = gibbs_summary(f, R);
  IsotropicReport report;
  report.asymptotic_L = asymptotic_isotropic_constant(s);
  report.volume_radius = asymptotic_volume_radius(s);
  std::vector<int> ns(n_list.begin(), n_list.end());
  std::sort(ns.begin(), ns.end());
  for (int n : ns) {
    report.finite_n_estimates.push_back(
        {n, finite_n_isotropic_estimate(f, R, n, samples, seed, opts)});
  }
  return report;
}

}  // namespace orlicz
