#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace orlicz {

/// Declared asymptotic lower growth of a potential: M in Omega(x^g).
class GrowthClass {
 public:
  static GrowthClass power(double exponent) { return GrowthClass(false, exponent); }
  static GrowthClass superpolynomial() { return GrowthClass(true, 0.0); }

  bool is_superpolynomial() const { return superpolynomial_; }
  /// Only meaningful for power-type growth.
  double exponent() const { return exponent_; }

  /// True when the declared growth implies M in Omega(x^g).
  bool at_least(double g) const { return superpolynomial_ || exponent_ >= g; }

  std::string to_string() const;

  bool operator==(const GrowthClass&) const = default;

 private:
  GrowthClass(bool superpolynomial, double exponent)
      : superpolynomial_(superpolynomial), exponent_(exponent) {}

  bool superpolynomial_;
  double exponent_;
};

/// An even convex potential M with M(0) = 0 and M(x) > 0 elsewhere.
///
/// Built-in families are constructed through the named factories (which
/// validate their parameters) or parse_orlicz_spec. `custom` wraps arbitrary
/// callables without validation; it exists for user-supplied potentials and
/// for exercising the axiom checker against counterexamples.
///
/// Values are immutable once built and may be shared between threads.
class OrliczFunction {
 public:
  struct Power {
    double p;
  };
  struct Mix {
    double p;
    double q;
    double w;
  };
  struct CoshM1 {};
  struct ExpSq {};
  struct Custom {
    std::string name;
    std::function<double(double)> eval;
    std::function<double(double)> subgradient;
    GrowthClass growth;
  };
  using Family = std::variant<Power, Mix, CoshM1, ExpSq, Custom>;

  /// |x|^p, p >= 1.
  static OrliczFunction power(double p);
  /// w|x|^p + (1-w)|x|^q with p, q >= 1 and w in [0, 1].
  static OrliczFunction mix(double p, double q, double w);
  /// cosh(x) - 1.
  static OrliczFunction coshm1();
  /// exp(x^2) - 1.
  static OrliczFunction expsq();
  static OrliczFunction custom(std::string name,
                               std::function<double(double)> eval,
                               std::function<double(double)> subgradient,
                               GrowthClass growth);

  double operator()(double x) const;
  /// An element of the subdifferential; 0 at kinks located at the origin.
  double subgradient(double x) const;

  std::string_view name() const;
  GrowthClass growth_class() const;
  std::vector<std::pair<std::string, double>> params() const;
  const Family& family() const { return family_; }

  /// p when M(x) = |x|^p exactly.
  std::optional<double> power_exponent() const;

  /// Canonical spec string; parse_orlicz_spec(f.spec()) reproduces f.
  std::string spec() const;

 private:
  explicit OrliczFunction(Family family) : family_(std::move(family)) {}

  Family family_;
};

/// Parses `<family>(:<key>=<decimal>(,<key>=<decimal>)*)?`.
/// Throws ParseError on malformed input and DomainError on parameters that
/// break the Orlicz axioms (e.g. power:p=0.5).
OrliczFunction parse_orlicz_spec(std::string_view spec);

struct AxiomCheck {
  std::string axiom;
  double worst_violation = 0.0;
  bool passed = true;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;

  bool all_passed() const;
  const AxiomCheck& check(std::string_view axiom) const;
};

/// Violations above this magnitude fail an axiom.
inline constexpr double kAxiomTolerance = 1e-12;

/// Checks zero-at-origin, positivity, evenness, midpoint convexity, the
/// subgradient inequality and the declared growth class on `grid`.
/// Violations of the inequality axioms are measured relative to
/// max(1, |values involved|) so that rounding in large values does not count.
AxiomReport verify_orlicz_axioms(const OrliczFunction& f,
                                 std::span<const double> grid);

}  // namespace orlicz
