#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "orlicz_lab/gibbs.hpp"
#include "orlicz_lab/orlicz_function.hpp"
#include "orlicz_lab/quadrature.hpp"

namespace orlicz {

/// A bound of the form prefactor * exp(exponent).
struct BoundValue {
  std::string name;
  double prefactor = 1.0;
  double exponent = 0.0;
  double value = 1.0;  // prefactor * exp(exponent)
  /// True when an asymptotic (1 + o(1)) factor was replaced by 1.
  bool asymptotic_caveat = false;
};

BoundValue make_bound(std::string name, double prefactor, double exponent,
                      bool asymptotic_caveat);

// Unless stated otherwise, t is the normalised deviation of
// ||X||^2 / (n L2) from 1; evaluators apply the L2 factors themselves.

/// |alpha*| Var[Z^2] sqrt(2 pi phi'') / ((t L2)^2 sqrt(n)). Requires t > 0.
BoundValue chebyshev_thinshell_bound(const GibbsSummary& s, double n, double t);

/// |alpha*| sqrt(2 pi n phi'') exp(-t^2 n L2^2 / (2 Var[Z^2])).
BoundValue mdp_upper_bound(const GibbsSummary& s, double n, double t);

/// |alpha*| sqrt(2 pi n phi'') exp(alpha* r_n); r_n defaults to t^2 n L2^2.
BoundValue mdp_lower_bound(const GibbsSummary& s, double n, double t,
                           std::optional<double> r_n = std::nullopt);

/// Bernstein inequality for the mean of n copies of Y = Z^2 - L2, with t the
/// raw deviation |mean| > t. NormKind::exp gives 2 exp(-t^2 n / (16 A^2)) and
/// throws RangeError unless t < 4A; NormKind::subgaussian gives
/// 2 exp(-t^2 n / (8 A^2)) for every t > 0.
BoundValue bernstein_bound(const OrliczNormConstant& A, double n, double t);

/// 4 |alpha*| sqrt(2 pi n phi'') exp(-t^2 n L2^2 / (8 A^2)). Throws
/// HypothesisError unless A.kind is subgaussian.
BoundValue expectation_centered_bound(const GibbsSummary& s, const OrliczNormConstant& A,
                                      double n, double t);

struct SmallPBounds {
  std::optional<BoundValue> lower;  // present only for 4/3 < p < 2
  BoundValue upper;
};

/// Upper and lower thin-shell bounds for l_p balls with 1 <= p < 2, from the
/// closed forms at R = 1. Throws DomainError for p outside [1, 2).
SmallPBounds lp_small_p_bounds(double p, double n, double t);

/// Cumulant generating function of Y = Z^2 - L2 and its Legendre transform.
///
/// The finite domain of Lambda above 0 is located by geometric probing and
/// bisection; below 0 Lambda is always finite. Lambda*(s) is found by
/// golden-section maximisation of u s - Lambda(u). Requires growth class >= 2
/// (HypothesisError otherwise).
class CramerTransform {
 public:
  CramerTransform(const OrliczFunction& f, double R, const QuadratureConfig& cfg = {});
  CramerTransform(const OrliczFunction& f, const GibbsSummary& s,
                  const QuadratureConfig& cfg = {});

  /// Lambda(u); +inf outside the finite domain, exactly 0 at u = 0.
  double log_mgf(double u) const;
  /// Lambda*(s); +inf for s <= -L2.
  double legendre(double s) const;
  /// inf over |s| >= t of Lambda*(s) = min(Lambda*(t), Lambda*(-t)); only the
  /// s < 0 branch when the transform is one-sided.
  double rate(double t) const;

  /// Supremum of the finite domain of Lambda; +inf when none was found.
  double u_max() const { return u_max_; }
  /// True when Lambda diverges at every probed u > 0.
  bool one_sided() const { return one_sided_; }
  const GibbsSummary& summary() const { return s_; }

 private:
  void locate_domain();
  double maximise(double s, double sign) const;

  OrliczFunction f_;
  GibbsSummary s_;
  QuadratureConfig cfg_;
  double u_scale_ = 1.0;
  double u_max_ = 0.0;
  bool one_sided_ = false;
};

/// inf over |s| >= t of Lambda*(s) for Y = Z^2 - L2, t the raw deviation.
double cramer_rate(const OrliczFunction& f, double R, double t,
                   const QuadratureConfig& cfg = {});

/// (1/p) (x - L2)^{p/2} for x >= L2, +inf otherwise. Requires 1 <= p < 2.
double lp_ldp_rate_small_p(double p, double L2, double x);

struct Rate2dOptions {
  double x_lo = -1.0;
  double x_hi = 0.0;
  std::vector<double> y_values = {-1.0, 1.0};
  /// Multiply the quadratic form by 1/2.
  bool half = false;
};

struct Rate2d {
  double rate = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// Minimum of <(x, y), C^{-1} (x, y)> over x in [x_lo, x_hi] and y in
/// y_values, with C the row-major 2x2 covariance. Throws SingularityError when
/// C is not positive definite or its condition number is >= 1e12.
Rate2d rate_2d(const std::array<double, 4>& cov, const Rate2dOptions& opts = {});
Rate2d rate_2d(const GibbsSummary& s, const Rate2dOptions& opts = {});

struct ComparisonBounds {
  BoundValue lee_vempala;      // exp(-c min(t, t^2) sqrt(n))
  BoundValue guedon_milman;    // exp(-c min(t, t^3) sqrt(n))
  BoundValue schechtman_zinn;  // 12 exp(-c min(t, t^2) n), l_p with p >= 2
};

/// Literature bounds with a caller-supplied absolute constant c > 0.
ComparisonBounds comparison_bounds(double n, double t, double c);

struct RangeDiagnostics {
  double t_sqrt_n = 0.0;  // should be >> 1
  double t = 0.0;         // should be << 1
  double t_quarter = 0.0; // t n^{1/4}, should be >> 1 for the small-p lower bound
  /// t n^{(4-2p)/(2(4-p))}, should be << 1 for the small-p upper bound.
  std::optional<double> small_p_upper;
  /// t n^{1/4} / n^{(3p-4)/(4(4-p))}, should be << 1 for the small-p lower bound.
  std::optional<double> small_p_lower;
};

/// Ratios that quantify the asymptotic regime of (n, t); no verdict.
RangeDiagnostics tn_range_diagnostics(std::optional<double> p, double n, double t);

/// a^{1-p} exp(-a^p / p), an upper bound of the integral of exp(-y^p / p)
/// over [a, inf).
double generalized_gaussian_tail_bound(double p, double a);

/// Upper bound of (1/s^2) log(n P[|Z^2 - L2| > sqrt(n) s]) for the
/// p-generalised Gaussian Z, from the tail bound above:
/// (1/s^2) [log n - log(p^{1/p} Gamma(1 + 1/p)) - ((p-1)/2) log(a)
///          - a^{p/2} / p] with a = sqrt(n) s + L2. Requires 1 <= p < 2.
double el_tail_condition(double p, double n, double s_n);

}  // namespace orlicz
