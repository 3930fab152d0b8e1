#pragma once

#include <stdexcept>
#include <string>

namespace orlicz {

/// Broad class of a failure; the CLI maps these onto exit codes.
enum class ErrorCategory {
  usage,      // malformed input or violated precondition
  numerical,  // a numerical routine could not deliver its contract
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define ORLICZ_DEFINE_ERROR(Name, Category)                                 \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(Category, what) {}       \
  };

ORLICZ_DEFINE_ERROR(ParseError, ErrorCategory::usage)
ORLICZ_DEFINE_ERROR(DomainError, ErrorCategory::usage)
ORLICZ_DEFINE_ERROR(HypothesisError, ErrorCategory::usage)
ORLICZ_DEFINE_ERROR(RangeError, ErrorCategory::usage)
ORLICZ_DEFINE_ERROR(NoTruncationError, ErrorCategory::numerical)
ORLICZ_DEFINE_ERROR(UnsolvableError, ErrorCategory::numerical)
ORLICZ_DEFINE_ERROR(DivergenceError, ErrorCategory::numerical)
ORLICZ_DEFINE_ERROR(DegenerateEstimateError, ErrorCategory::numerical)
ORLICZ_DEFINE_ERROR(ConstructionError, ErrorCategory::numerical)
ORLICZ_DEFINE_ERROR(EfficiencyError, ErrorCategory::numerical)
ORLICZ_DEFINE_ERROR(SingularityError, ErrorCategory::numerical)

#undef ORLICZ_DEFINE_ERROR

/// Adaptive quadrature ran out of subdivisions. Carries the best estimate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_estimate,
                   double error_bound)
      : Error(ErrorCategory::numerical, what),
        best_estimate_(best_estimate),
        error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

}  // namespace orlicz
