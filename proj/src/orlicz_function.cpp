#include "orlicz_lab/orlicz_function.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "orlicz_lab/error.hpp"

namespace orlicz {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double abs_power(double x, double p) {
  const double a = std::fabs(x);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

// d/dx |x|^p, taking 0 at the origin.
double abs_power_slope(double x, double p) {
  if (x == 0.0) return 0.0;
  const double sign = x > 0.0 ? 1.0 : -1.0;
  if (p == 1.0) return sign;
  if (p == 2.0) return 2.0 * x;
  return sign * p * std::pow(std::fabs(x), p - 1.0);
}

std::string format_decimal(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

void require_exponent(const char* key, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw DomainError("exponent " + std::string(key) + "=" + format_decimal(p) +
                      " must be >= 1 (|x|^p is not convex for p < 1)");
  }
}

}  // namespace

std::string GrowthClass::to_string() const {
  if (superpolynomial_) return "superpolynomial";
  return format_decimal(exponent_);
}

OrliczFunction OrliczFunction::power(double p) {
  require_exponent("p", p);
  return OrliczFunction(Power{p});
}

OrliczFunction OrliczFunction::mix(double p, double q, double w) {
  require_exponent("p", p);
  require_exponent("q", q);
  if (!(w >= 0.0 && w <= 1.0)) {
    throw DomainError("mix weight w=" + format_decimal(w) + " must lie in [0, 1]");
  }
  return OrliczFunction(Mix{p, q, w});
}

OrliczFunction OrliczFunction::coshm1() { return OrliczFunction(CoshM1{}); }

OrliczFunction OrliczFunction::expsq() { return OrliczFunction(ExpSq{}); }

OrliczFunction OrliczFunction::custom(std::string name,
                                      std::function<double(double)> eval,
                                      std::function<double(double)> subgradient,
                                      GrowthClass growth) {
  return OrliczFunction(
      Custom{std::move(name), std::move(eval), std::move(subgradient), growth});
}

double OrliczFunction::operator()(double x) const {
  return std::visit(
      Overloaded{
          [x](const Power& f) { return abs_power(x, f.p); },
          [x](const Mix& f) {
            return f.w * abs_power(x, f.p) + (1.0 - f.w) * abs_power(x, f.q);
          },
          [x](const CoshM1&) {
            // 2 sinh^2(x/2) keeps full relative precision near 0.
            const double s = std::sinh(0.5 * x);
            return 2.0 * s * s;
          },
          [x](const ExpSq&) { return std::expm1(x * x); },
          [x](const Custom& f) { return f.eval(x); },
      },
      family_);
}

double OrliczFunction::subgradient(double x) const {
  return std::visit(
      Overloaded{
          [x](const Power& f) { return abs_power_slope(x, f.p); },
          [x](const Mix& f) {
            return f.w * abs_power_slope(x, f.p) +
                   (1.0 - f.w) * abs_power_slope(x, f.q);
          },
          [x](const CoshM1&) { return std::sinh(x); },
          [x](const ExpSq&) { return 2.0 * x * std::exp(x * x); },
          [x](const Custom& f) { return f.subgradient(x); },
      },
      family_);
}

std::string_view OrliczFunction::name() const {
  return std::visit(Overloaded{
                        [](const Power&) -> std::string_view { return "power"; },
                        [](const Mix&) -> std::string_view { return "mix"; },
                        [](const CoshM1&) -> std::string_view { return "coshm1"; },
                        [](const ExpSq&) -> std::string_view { return "expsq"; },
                        [](const Custom& f) -> std::string_view { return f.name; },
                    },
                    family_);
}

GrowthClass OrliczFunction::growth_class() const {
  return std::visit(
      Overloaded{
          [](const Power& f) { return GrowthClass::power(f.p); },
          [](const Mix& f) {
            double g = 0.0;
            if (f.w > 0.0) g = std::max(g, f.p);
            if (f.w < 1.0) g = std::max(g, f.q);
            return GrowthClass::power(g);
          },
          [](const CoshM1&) { return GrowthClass::superpolynomial(); },
          [](const ExpSq&) { return GrowthClass::superpolynomial(); },
          [](const Custom& f) { return f.growth; },
      },
      family_);
}

std::vector<std::pair<std::string, double>> OrliczFunction::params() const {
  using Params = std::vector<std::pair<std::string, double>>;
  return std::visit(Overloaded{
                        [](const Power& f) { return Params{{"p", f.p}}; },
                        [](const Mix& f) {
                          return Params{{"p", f.p}, {"q", f.q}, {"w", f.w}};
                        },
                        [](const auto&) { return Params{}; },
                    },
                    family_);
}

std::optional<double> OrliczFunction::power_exponent() const {
  if (const auto* f = std::get_if<Power>(&family_)) return f->p;
  if (const auto* f = std::get_if<Mix>(&family_)) {
    if (f->p == f->q || f->w == 1.0) return f->p;
    if (f->w == 0.0) return f->q;
  }
  return std::nullopt;
}

std::string OrliczFunction::spec() const {
  std::string out(name());
  const auto ps = params();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    out += (i == 0 ? ':' : ',');
    out += ps[i].first;
    out += '=';
    out += format_decimal(ps[i].second);
  }
  return out;
}

OrliczFunction parse_orlicz_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view family = spec.substr(0, colon);

  static const std::map<std::string_view, std::vector<std::string_view>> kKeys = {
      {"power", {"p"}},
      {"mix", {"p", "q", "w"}},
      {"coshm1", {}},
      {"expsq", {}},
  };
  const auto fam = kKeys.find(family);
  if (fam == kKeys.end()) {
    throw ParseError("unknown Orlicz family '" + std::string(family) +
                     "' (expected one of power, mix, coshm1, expsq)");
  }

  std::map<std::string, double, std::less<>> values;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    if (rest.empty()) throw ParseError("empty parameter list after ':'");
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw ParseError("malformed parameter '" + std::string(item) +
                         "' (expected <key>=<decimal>)");
      }
      const std::string_view key = item.substr(0, eq);
      const std::string_view num = item.substr(eq + 1);
      const auto& allowed = fam->second;
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ParseError("unknown parameter '" + std::string(key) +
                         "' for family " + std::string(family));
      }
      if (values.count(key) != 0) {
        throw ParseError("duplicate parameter '" + std::string(key) + "'");
      }
      double v = 0.0;
      const char* first = num.data();
      const char* last = num.data() + num.size();
      auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::general);
      if (num.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ParseError("malformed decimal '" + std::string(num) +
                         "' for parameter " + std::string(key));
      }
      values.emplace(std::string(key), v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }

  for (const auto key : fam->second) {
    if (values.count(key) == 0) {
      throw ParseError("missing parameter '" + std::string(key) + "' for family " +
                       std::string(family));
    }
  }

  if (family == "power") return OrliczFunction::power(values.at("p"));
  if (family == "mix") {
    return OrliczFunction::mix(values.at("p"), values.at("q"), values.at("w"));
  }
  if (family == "coshm1") return OrliczFunction::coshm1();
  return OrliczFunction::expsq();
}

bool AxiomReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AxiomCheck& c) { return c.passed; });
}

const AxiomCheck& AxiomReport::check(std::string_view axiom) const {
  for (const auto& c : checks) {
    if (c.axiom == axiom) return c;
  }
  throw DomainError("no axiom named '" + std::string(axiom) + "' in report");
}

namespace {

double scaled(double excess, double scale) {
  if (!(excess > 0.0)) return 0.0;
  return excess / std::max(1.0, scale);
}

// M(x) / x^g at x in {10, 100, 1000} may decay by at most one decade for
// power growth, and must not decay at all against x^8 for superpolynomial
// growth. Infinite values mean faster-than-any-power growth.
double growth_violation(const OrliczFunction& f) {
  const GrowthClass g = f.growth_class();
  const std::array<double, 3> xs = {10.0, 100.0, 1000.0};
  const double k = g.is_superpolynomial() ? 8.0 : g.exponent();
  std::array<double, 3> log_ratio{};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double m = f(xs[i]);
    if (!(m > 0.0)) return std::numeric_limits<double>::infinity();
    log_ratio[i] = std::isinf(m) ? std::numeric_limits<double>::infinity()
                                 : std::log10(m) - k * std::log10(xs[i]);
  }
  if (g.is_superpolynomial()) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      if (std::isinf(log_ratio[i])) break;
      worst = std::max(worst, log_ratio[i] - log_ratio[i + 1]);
    }
    return worst;
  }
  if (std::isinf(log_ratio[2])) return 0.0;
  return std::max(0.0, (log_ratio[0] - log_ratio[2]) - 1.0);
}

}  // namespace

AxiomReport verify_orlicz_axioms(const OrliczFunction& f,
                                 std::span<const double> grid) {
  if (grid.empty()) throw DomainError("axiom grid must be nonempty");

  AxiomReport report;
  auto add = [&report](std::string name, double worst) {
    report.checks.push_back({std::move(name), worst, worst <= kAxiomTolerance});
  };

  add("zero-at-origin", std::fabs(f(0.0)));

  // Positivity is strict: M(x) == 0 at x != 0 fails even though the
  // magnitude of the violation is zero.
  double pos_worst = 0.0;
  bool pos_ok = true;
  for (double x : grid) {
    if (x == 0.0) continue;
    const double m = f(x);
    if (!(m > 0.0)) {
      pos_ok = false;
      pos_worst = std::max(pos_worst, std::isnan(m) ? 1.0 : -m);
    }
  }
  report.checks.push_back({"positivity", pos_worst, pos_ok});

  double even_worst = 0.0;
  for (double x : grid) {
    const double a = f(x);
    const double b = f(-x);
    even_worst = std::max(even_worst,
                          scaled(std::fabs(a - b), std::max(std::fabs(a), std::fabs(b))));
  }
  add("evenness", even_worst);

  double convex_worst = 0.0;
  double subgrad_worst = 0.0;
  for (double x : grid) {
    const double mx = f(x);
    const double sx = f.subgradient(x);
    for (double y : grid) {
      const double my = f(y);
      const double mid = f(0.5 * (x + y));
      const double chord = 0.5 * (mx + my);
      convex_worst = std::max(convex_worst, scaled(mid - chord, std::fabs(chord)));
      const double lhs = sx * (y - x);
      const double rhs = my - mx;
      subgrad_worst = std::max(
          subgrad_worst,
          scaled(lhs - rhs, std::max({std::fabs(lhs), std::fabs(mx), std::fabs(my)})));
    }
  }
  add("midpoint-convexity", convex_worst);
  add("subgradient-inequality", subgrad_worst);
  add("growth-class", growth_violation(f));
  return report;
}

}  // namespace orlicz
