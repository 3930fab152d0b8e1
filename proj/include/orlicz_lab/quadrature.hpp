#pragma once

#include <functional>
#include <span>

#include "orlicz_lab/orlicz_function.hpp"

namespace orlicz {

/// Truncation, tolerance and subdivision policy for real-line integrals.
struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-30;
  int max_subdivisions = 1 << 15;
  /// Margin in log scale: the integrand is cut where alpha*M drops this far
  /// below its peak.
  double truncation_margin = 40.0;

  /// Throws DomainError unless rel_tol in (0, 1), abs_tol > 0,
  /// max_subdivisions >= 8 and truncation_margin > 0.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod integration over [a, b].
/// Each interval between consecutive `breakpoints` (sorted, including the
/// endpoints) is refined independently with its own subdivision budget.
/// Throws ConvergenceError when a budget is exhausted.
QuadratureResult integrate(const Integrand& fn, std::span<const double> breakpoints,
                           const QuadratureConfig& cfg = {});

QuadratureResult integrate(const Integrand& fn, double a, double b,
                           const QuadratureConfig& cfg = {});

/// Smallest X (to bisection precision) with alpha*M(X) <= -truncation_margin.
/// Throws DomainError for alpha >= 0 and NoTruncationError when M appears
/// bounded.
double truncation_point(const OrliczFunction& f, double alpha,
                        const QuadratureConfig& cfg = {});

enum class Parity { none, even, odd };

/// Integral of g(x) exp(alpha M(x)) over the real line, for g of at most
/// polynomial growth. The domain is [-X_T, X_T] split at 0; a declared even g
/// is integrated on [0, X_T] and doubled, a declared odd g yields 0.
double tilted_integral(const OrliczFunction& f, double alpha, const Integrand& g,
                       Parity parity = Parity::none,
                       const QuadratureConfig& cfg = {});

/// log of the integral of exp(alpha M(x) + log_weight(x)) over the real line,
/// for an even log_weight that may grow like a power of x (exponential
/// weights). The integrand is shifted by its peak before integration, so the
/// result is finite even when the integral itself overflows. Returns +inf when
/// the integrand does not decay (the integral diverges). `kinks` lists points
/// x > 0 where log_weight is not smooth; they become breakpoints. The relative
/// tolerance is relaxed to the rounding level of the exponent at its peak.
double log_tilted_integral_even(const OrliczFunction& f, double alpha,
                                const Integrand& log_weight,
                                std::span<const double> kinks = {},
                                const QuadratureConfig& cfg = {});

}  // namespace orlicz
