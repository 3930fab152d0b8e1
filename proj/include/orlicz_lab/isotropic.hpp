#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "orlicz_lab/gibbs.hpp"
#include "orlicz_lab/orlicz_function.hpp"
#include "orlicz_lab/sampling.hpp"

namespace orlicz {

struct IsotropicEntry {
  int n = 0;
  MonteCarloEstimate estimate;
};

struct IsotropicReport {
  double asymptotic_L = 0.0;
  double volume_radius = 0.0;  // limit of vol(B_M^n(nR))^{1/n}
  std::vector<IsotropicEntry> finite_n_estimates;  // sorted by n
};

/// Limit of the isotropic constant of B_M^n(nR): exp(alpha* R - phi) sqrt(L2).
double asymptotic_isotropic_constant(const GibbsSummary& s);

/// Limit of vol(B_M^n(nR))^{1/n}: exp(phi - alpha* R).
double asymptotic_volume_radius(const GibbsSummary& s);

/// Natural log of vol{x in R^n : sum |x_i|^p <= nR}:
/// n log(2 Gamma(1 + 1/p)) - log Gamma(1 + n/p) + (n/p) log(nR).
double lp_ball_volume_exact(double p, int n, double R);

/// Isotropic constant of B_M^n(nR) as sqrt(E||X||^2 / n) / vol^{1/n}, with
/// the second moment estimated by importance sampling. The volume is exact
/// for power families; otherwise the limit radius is used and the estimate is
/// flagged approximate. Errors and interval follow by the square-root delta
/// method and monotone transformation of the interval.
MonteCarloEstimate finite_n_isotropic_estimate(const OrliczFunction& f, double R, int n,
                                               std::uint64_t samples, std::uint64_t seed,
                                               const SamplingOptions& opts = {});

/// Asymptotic values plus one estimate per dimension (sorted by n, all drawn
/// with `seed`).
IsotropicReport isotropic_report(const OrliczFunction& f, double R, std::span<const int> n_list,
                                 std::uint64_t samples, std::uint64_t seed,
                                 const SamplingOptions& opts = {});

}  // namespace orlicz
