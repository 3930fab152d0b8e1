#pragma once

#include <array>

#include "orlicz_lab/orlicz_function.hpp"
#include "orlicz_lab/quadrature.hpp"

namespace orlicz {

/// Thermodynamic constants of the Gibbs density p(x) = exp(alpha* M(x) - phi)
/// at the critical inverse temperature alpha*, where phi'(alpha*) = R.
/// Z denotes a random variable with that density.
struct GibbsSummary {
  double alpha_star = 0.0;
  double R = 0.0;
  double phi = 0.0;   // log-partition function at alpha*
  double phi1 = 0.0;  // phi'(alpha*) = E[M(Z)], equal to R up to the solver residual
  double phi2 = 0.0;  // phi''(alpha*) = Var[M(Z)]
  double L2 = 0.0;    // E[Z^2]
  double varZ2 = 0.0; // Var[Z^2]
  double EZ4 = 0.0;   // E[Z^4]
  /// Row-major covariance of (M(Z) - R, Z^2 - L2).
  std::array<double, 4> cov{};

  /// |phi1 - R| / R.
  double alpha_residual() const;
};

enum class NormKind {
  exp,          // inf{lambda : E exp(|Y| / lambda) <= 2}
  subgaussian,  // inf{lambda : E exp(Y^2 / lambda^2) <= 2}
};

/// Orlicz-norm constant of Y = Z^2 - L2 used by the Bernstein bounds.
struct OrliczNormConstant {
  NormKind kind = NormKind::exp;
  double A = 0.0;
};

/// phi(alpha) = log of the integral of exp(alpha M).
double log_partition(const OrliczFunction& f, double alpha,
                     const QuadratureConfig& cfg = {});

struct PartitionDerivatives {
  double first = 0.0;   // E_alpha[M]
  double second = 0.0;  // Var_alpha[M]
};

/// phi'(alpha) and phi''(alpha) from tilted moment integrals.
PartitionDerivatives log_partition_derivatives(const OrliczFunction& f, double alpha,
                                               const QuadratureConfig& cfg = {});

/// Relative residual |phi'(alpha*) - R| / R guaranteed by solve_alpha_star.
inline constexpr double kAlphaStarTolerance = 1e-8;

/// The unique alpha < 0 with phi'(alpha) = R. Brackets geometrically from
/// alpha = -1 and then runs a safeguarded Newton/bisection iteration in
/// log(-alpha). Throws UnsolvableError when no bracket is found within 200
/// doublings or the residual contract cannot be met.
double solve_alpha_star(const OrliczFunction& f, double R,
                        const QuadratureConfig& cfg = {});

GibbsSummary gibbs_summary(const OrliczFunction& f, double R,
                           const QuadratureConfig& cfg = {});

/// Requires growth class >= 2 for NormKind::exp and >= 4 (or
/// superpolynomial) for NormKind::subgaussian; throws HypothesisError
/// otherwise and DivergenceError if the expectation is infinite at every
/// probed lambda.
OrliczNormConstant orlicz_norm_constant(const OrliczFunction& f, double R, NormKind kind,
                                        const QuadratureConfig& cfg = {});

/// Overload reusing a summary already computed for the same (f, R).
OrliczNormConstant orlicz_norm_constant(const OrliczFunction& f, const GibbsSummary& s,
                                        NormKind kind, const QuadratureConfig& cfg = {});

/// Closed forms for M(x) = |x|^p.
GibbsSummary lp_closed_forms(double p, double R);

}  // namespace orlicz
