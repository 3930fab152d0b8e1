#include "orlicz_lab/gibbs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "orlicz_lab/error.hpp"

namespace orlicz {

double GibbsSummary::alpha_residual() const { return std::fabs(phi1 - R) / R; }

namespace {

void require_negative(double alpha, const char* op) {
  if (!(alpha < 0.0)) {
    throw DomainError(std::string(op) + " requires alpha < 0");
  }
}

void require_radius(double R) {
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw DomainError("radius R must be a positive finite number");
  }
}

double tilted_mean(const OrliczFunction& f, double alpha, double z0, const Integrand& g,
                   const QuadratureConfig& cfg) {
  return tilted_integral(f, alpha, g, Parity::even, cfg) / z0;
}

}  // namespace

double log_partition(const OrliczFunction& f, double alpha, const QuadratureConfig& cfg) {
  require_negative(alpha, "log_partition");
  return std::log(tilted_integral(f, alpha, [](double) { return 1.0; }, Parity::even, cfg));
}

PartitionDerivatives log_partition_derivatives(const OrliczFunction& f, double alpha,
                                               const QuadratureConfig& cfg) {
  require_negative(alpha, "log_partition_derivatives");
  const double z0 = tilted_integral(f, alpha, [](double) { return 1.0; }, Parity::even, cfg);
  PartitionDerivatives d;
  d.first = tilted_mean(f, alpha, z0, [&f](double x) { return f(x); }, cfg);
  const double m = d.first;
  d.second = tilted_mean(
      f, alpha, z0,
      [&f, m](double x) {
        const double c = f(x) - m;
        return c * c;
      },
      cfg);
  return d;
}

double solve_alpha_star(const OrliczFunction& f, double R, const QuadratureConfig& cfg) {
  require_radius(R);

  // phi' is increasing in alpha, hence decreasing in s = log(-alpha).
  auto residual = [&](double s) {
    const auto d = log_partition_derivatives(f, -std::exp(s), cfg);
    return std::pair{d.first - R, d.second};
  };

  double s = 0.0;
  auto [g, var] = residual(s);
  double s_lo = s;  // g(s_lo) >= 0
  double s_hi = s;  // g(s_hi) <= 0
  double g_lo = g;
  double g_hi = g;
  const double step = std::log(2.0);
  int doublings = 0;
  if (g < 0.0) {
    while (g_lo < 0.0) {
      if (++doublings > 200) {
        throw UnsolvableError("no alpha* bracket for " + f.spec() + " at R=" +
                              std::to_string(R) + " within 200 doublings");
      }
      s_hi = s_lo;
      g_hi = g_lo;
      s_lo -= step;
      g_lo = residual(s_lo).first;
    }
  } else {
    while (g_hi > 0.0) {
      if (++doublings > 200) {
        throw UnsolvableError("no alpha* bracket for " + f.spec() + " at R=" +
                              std::to_string(R) + " within 200 doublings");
      }
      s_lo = s_hi;
      g_lo = g_hi;
      s_hi += step;
      g_hi = residual(s_hi).first;
    }
  }

  // Safeguarded Newton: d g / d s = phi''(alpha) * alpha.
  s = 0.5 * (s_lo + s_hi);
  std::tie(g, var) = residual(s);
  for (int iter = 0; iter < 200; ++iter) {
    if (std::fabs(g) <= 1e-14 * R) break;
    if (g > 0.0) {
      s_lo = s;
    } else {
      s_hi = s;
    }
    if (s_hi - s_lo <= 1e-15 * std::max(1.0, std::fabs(s))) break;
    const double slope = -var * std::exp(s);
    double next = s - g / slope;
    if (!(next > s_lo && next < s_hi) || !std::isfinite(next)) next = 0.5 * (s_lo + s_hi);
    s = next;
    std::tie(g, var) = residual(s);
  }

  if (!(std::fabs(g) <= kAlphaStarTolerance * R)) {
    throw UnsolvableError("alpha* residual " + std::to_string(std::fabs(g) / R) +
                          " exceeds tolerance for " + f.spec());
  }
  return -std::exp(s);
}

GibbsSummary gibbs_summary(const OrliczFunction& f, double R, const QuadratureConfig& cfg) {
  GibbsSummary s;
  s.R = R;
  s.alpha_star = solve_alpha_star(f, R, cfg);
  const double a = s.alpha_star;
  const double z0 = tilted_integral(f, a, [](double) { return 1.0; }, Parity::even, cfg);
  s.phi = std::log(z0);

  s.phi1 = tilted_mean(f, a, z0, [&f](double x) { return f(x); }, cfg);
  const double m1 = s.phi1;
  s.phi2 = tilted_mean(
      f, a, z0,
      [&f, m1](double x) {
        const double c = f(x) - m1;
        return c * c;
      },
      cfg);
  s.L2 = tilted_mean(f, a, z0, [](double x) { return x * x; }, cfg);
  s.EZ4 = tilted_mean(
      f, a, z0,
      [](double x) {
        const double x2 = x * x;
        return x2 * x2;
      },
      cfg);
  const double l2 = s.L2;
  s.varZ2 = tilted_mean(
      f, a, z0,
      [l2](double x) {
        const double c = x * x - l2;
        return c * c;
      },
      cfg);
  const double cross = tilted_mean(
      f, a, z0, [&f, l2, R](double x) { return (f(x) - R) * (x * x - l2); }, cfg);
  s.cov = {s.phi2, cross, cross, s.varZ2};
  return s;
}

OrliczNormConstant orlicz_norm_constant(const OrliczFunction& f, double R, NormKind kind,
                                        const QuadratureConfig& cfg) {
  const double needed = kind == NormKind::exp ? 2.0 : 4.0;
  if (!f.growth_class().at_least(needed)) {
    throw HypothesisError(std::string(kind == NormKind::exp ? "exp" : "subgaussian") +
                          " Orlicz-norm constant requires M in Omega(x^" +
                          std::to_string(static_cast<int>(needed)) + "); " + f.spec() +
                          " has growth class " + f.growth_class().to_string());
  }
  return orlicz_norm_constant(f, gibbs_summary(f, R, cfg), kind, cfg);
}

OrliczNormConstant orlicz_norm_constant(const OrliczFunction& f, const GibbsSummary& s,
                                        NormKind kind, const QuadratureConfig& cfg) {
  const double needed = kind == NormKind::exp ? 2.0 : 4.0;
  if (!f.growth_class().at_least(needed)) {
    throw HypothesisError(std::string(kind == NormKind::exp ? "exp" : "subgaussian") +
                          " Orlicz-norm constant requires M in Omega(x^" +
                          std::to_string(static_cast<int>(needed)) + "); " + f.spec() +
                          " has growth class " + f.growth_class().to_string());
  }
  const double l2 = s.L2;
  const std::array<double, 1> kinks = {std::sqrt(l2)};

  // log E[exp(psi_lambda(Z))], +inf when divergent.
  auto log_expectation = [&](double lambda) {
    Integrand psi;
    if (kind == NormKind::exp) {
      psi = [l2, lambda](double x) { return std::fabs(x * x - l2) / lambda; };
    } else {
      psi = [l2, lambda](double x) {
        const double y = (x * x - l2) / lambda;
        return y * y;
      };
    }
    return log_tilted_integral_even(f, s.alpha_star, psi, kinks, cfg) - s.phi;
  };
  const double log2 = std::log(2.0);

  double hi = 1.0;
  int doublings = 0;
  bool seen_finite = false;
  while (true) {
    const double v = log_expectation(hi);
    if (std::isfinite(v)) seen_finite = true;
    if (v <= log2) break;
    if (++doublings > 200) {
      if (!seen_finite) {
        throw DivergenceError("E exp(...) of Z^2 - L2 is infinite at every probed lambda for " +
                              f.spec());
      }
      throw UnsolvableError("Orlicz-norm constant not bracketed for " + f.spec());
    }
    hi *= 2.0;
  }
  double lo = hi;
  while (log_expectation(lo) <= log2) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) throw UnsolvableError("Orlicz-norm constant collapsed to 0");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = std::sqrt(lo * hi);
    (log_expectation(mid) <= log2 ? hi : lo) = mid;
  }
  return {kind, 0.5 * (lo + hi)};
}

GibbsSummary lp_closed_forms(double p, double R) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp closed forms require p >= 1");
  require_radius(R);
  const double g1 = std::tgamma(1.0 + 1.0 / p);
  const double g3 = std::tgamma(1.0 + 3.0 / p);
  const double g5 = std::tgamma(1.0 + 5.0 / p);

  GibbsSummary s;
  s.R = R;
  s.alpha_star = -1.0 / (p * R);
  s.phi = std::log(2.0) + std::lgamma(1.0 + 1.0 / p) + std::log(p * R) / p;
  s.phi1 = R;
  s.phi2 = p * R * R;

  // Unit-radius moments, dilated by x -> R^{1/p} x.
  const double l2_unit = std::pow(p, 2.0 / p) * g3 / (3.0 * g1);
  const double var_unit =
      std::pow(p, 4.0 / p) * (9.0 * g5 * g1 - 5.0 * g3 * g3) / (45.0 * g1 * g1);
  s.L2 = std::pow(R, 2.0 / p) * l2_unit;
  s.varZ2 = std::pow(R, 4.0 / p) * var_unit;
  s.EZ4 = s.varZ2 + s.L2 * s.L2;

  // E|Z|^k = (pR)^{k/p} Gamma((k+1)/p) / Gamma(1/p), here with k = p + 2.
  const double moment_p2 =
      std::pow(p * R, (p + 2.0) / p) * std::tgamma((p + 3.0) / p) / std::tgamma(1.0 / p);
  const double cross = moment_p2 - R * s.L2;
  s.cov = {s.phi2, cross, cross, s.varZ2};
  return s;
}

}  // namespace orlicz
