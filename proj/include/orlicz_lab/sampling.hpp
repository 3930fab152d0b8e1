#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "orlicz_lab/gibbs.hpp"
#include "orlicz_lab/orlicz_function.hpp"
#include "orlicz_lab/rng.hpp"

namespace orlicz {

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;   // 95% interval
  double ci_high = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  double effective_sample_size = 0.0;
  /// Set when the estimate should not be trusted: effective sample size or
  /// event count below 30, or a rare-event regime (theoretical value < 1e-6).
  bool unreliable = false;
  /// Set when a finite-n quantity was replaced by its asymptotic value.
  bool approximate = false;
};

struct SamplingOptions {
  /// Replace the delta-method interval with a percentile bootstrap.
  bool bootstrap = false;
  int bootstrap_resamples = 1000;
};

/// Rejection sampler for p(x) = exp(alpha M(x) - phi(alpha)).
///
/// Envelope: height 1 on [-x0, x0] and exp(alpha (M(x0) + s (|x| - x0)))
/// beyond, where s is the subgradient at x0. Each tail has mass
/// exp(alpha M(x0)) / (|alpha| s); x0 is where that mass equals x0, so the
/// tails hold half of the envelope mass.
class GibbsSampler {
 public:
  /// Throws ConstructionError when the subgradient at x0 is not positive.
  GibbsSampler(OrliczFunction f, double alpha);

  double draw(Rng& rng);

  double x0() const { return x0_; }
  double slope() const { return slope_; }
  /// Total envelope mass 2 x0 + 2 tail.
  double envelope_mass() const { return 2.0 * (x0_ + tail_); }

  std::uint64_t proposals() const { return proposals_; }
  std::uint64_t accepted() const { return accepted_; }

 private:
  OrliczFunction f_;
  double alpha_;
  double x0_ = 0.0;
  double slope_ = 0.0;
  double m0_ = 0.0;
  double tail_ = 0.0;
  double centre_prob_ = 0.0;
  std::uint64_t proposals_ = 0;
  std::uint64_t accepted_ = 0;
  std::uint64_t window_proposals_ = 0;
  std::uint64_t window_accepted_ = 0;
};

/// i.i.d. draws from the Gibbs density at alpha*(f, R); deterministic in
/// (f, R, count, seed). Throws EfficiencyError when fewer than 1e-3 of 1e5
/// consecutive proposals are accepted.
std::vector<double> sample_gibbs(const OrliczFunction& f, double R, std::uint64_t count,
                                 std::uint64_t seed);

/// Draw from the p-generalized Gaussian density proportional to exp(-|x|^p / p).
double draw_generalized_gaussian(double p, Rng& rng);

/// One uniform point of {x : sum |x_i|^p <= radius_power} in dimension n.
std::vector<double> sample_lp_uniform_exact(double p, int n, double radius_power,
                                            std::uint64_t seed);

/// Same construction drawing from a caller-owned engine.
void sample_lp_uniform_exact(double p, double radius_power, Rng& rng, std::vector<double>& out);

/// chi(S1 <= 0) exp(-alpha S1); lies in [0, 1] for alpha < 0.
inline double importance_weight(double alpha, double s1) {
  return s1 <= 0.0 ? std::exp(-alpha * s1) : 0.0;
}

/// P[| ||X||^2 / n - L2 | >= t] for X uniform on B_M^n(nR), by the ratio of
/// Gibbs expectations of chi(S1 <= 0) chi(|S2| >= n t) exp(-alpha* S1) and
/// chi(S1 <= 0) exp(-alpha* S1). `t` is the unnormalised deviation.
/// Throws DegenerateEstimateError when every weight is zero.
MonteCarloEstimate thinshell_probability_is(const OrliczFunction& f, double R, int n,
                                            double t, std::uint64_t samples,
                                            std::uint64_t seed,
                                            const SamplingOptions& opts = {});

/// Plain Monte Carlo of the same probability with the exact l_p sampler.
MonteCarloEstimate thinshell_probability_exact(double p, double R, int n, double t,
                                               std::uint64_t samples, std::uint64_t seed);

/// E[||X||^2 / n] for X uniform on B_M^n(nR), same weighting scheme.
MonteCarloEstimate mean_sq_norm_estimate(const OrliczFunction& f, double R, int n,
                                         std::uint64_t samples, std::uint64_t seed,
                                         const SamplingOptions& opts = {});

/// Plain Monte Carlo of E[||X||^2 / n] with the exact l_p sampler.
MonteCarloEstimate mean_sq_norm_exact(double p, double R, int n, std::uint64_t samples,
                                      std::uint64_t seed);

struct NormalizationCheck {
  MonteCarloEstimate estimate;  // of E[chi(S1 <= 0) exp(-alpha* S1)]
  double theory = 0.0;          // 1 / (|alpha*| sqrt(2 pi n phi''))
  double ratio = 0.0;
};

NormalizationCheck normalization_check(const OrliczFunction& f, double R, int n,
                                       std::uint64_t samples, std::uint64_t seed);

}  // namespace orlicz
