#include "orlicz_lab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "orlicz_lab/error.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest Lambda the domain probe trusts.
constexpr double kLambdaCeiling = 1e6;

void require_n(double n) {
  if (!(n >= 1.0) || !std::isfinite(n)) throw DomainError("n must be >= 1");
}

void require_t(double t, bool strict) {
  if (!std::isfinite(t) || t < 0.0 || (strict && t == 0.0)) {
    throw DomainError(strict ? "t must be > 0" : "t must be >= 0");
  }
}

void require_small_p(double p, const char* op) {
  if (!(p >= 1.0 && p < 2.0)) throw DomainError(std::string(op) + " requires 1 <= p < 2");
}

// |alpha*| sqrt(2 pi n phi'').
double ratio_prefactor(const GibbsSummary& s, double n) {
  return std::fabs(s.alpha_star) * std::sqrt(2.0 * std::numbers::pi * n * s.phi2);
}

}  // namespace

BoundValue make_bound(std::string name, double prefactor, double exponent,
                      bool asymptotic_caveat) {
  return {std::move(name), prefactor, exponent, prefactor * std::exp(exponent),
          asymptotic_caveat};
}

BoundValue chebyshev_thinshell_bound(const GibbsSummary& s, double n, double t) {
  require_n(n);
  require_t(t, true);
  const double dev = t * s.L2;
  const double pre = std::fabs(s.alpha_star) * s.varZ2 *
                     std::sqrt(2.0 * std::numbers::pi * s.phi2) / (dev * dev * std::sqrt(n));
  return make_bound("chebyshev", pre, 0.0, true);
}

BoundValue mdp_upper_bound(const GibbsSummary& s, double n, double t) {
  require_n(n);
  require_t(t, false);
  return make_bound("thmB", ratio_prefactor(s, n),
                    -t * t * n * s.L2 * s.L2 / (2.0 * s.varZ2), true);
}

BoundValue mdp_lower_bound(const GibbsSummary& s, double n, double t,
                           std::optional<double> r_n) {
  require_n(n);
  require_t(t, false);
  const double r = r_n ? *r_n : t * t * n * s.L2 * s.L2;
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("r_n must be >= 0");
  return make_bound("thmC", ratio_prefactor(s, n), s.alpha_star * r, true);
}

BoundValue bernstein_bound(const OrliczNormConstant& A, double n, double t) {
  require_n(n);
  require_t(t, true);
  if (!(A.A > 0.0)) throw DomainError("Orlicz-norm constant must be positive");
  if (A.kind == NormKind::exp) {
    if (!(t < 4.0 * A.A)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "bernstein-i requires t in (0, 4A) = (0, " << 4.0 * A.A << "); got t = " << t;
      throw RangeError(msg.str());
    }
    return make_bound("bernstein-i", 2.0, -t * t * n / (16.0 * A.A * A.A), false);
  }
  return make_bound("bernstein-ii", 2.0, -t * t * n / (8.0 * A.A * A.A), false);
}

BoundValue expectation_centered_bound(const GibbsSummary& s, const OrliczNormConstant& A,
                                      double n, double t) {
  if (A.kind != NormKind::subgaussian) {
    throw HypothesisError("expectation bound needs the subgaussian constant (M in Omega(x^4))");
  }
  require_n(n);
  require_t(t, false);
  if (!(A.A > 0.0)) throw DomainError("Orlicz-norm constant must be positive");
  return make_bound("expectation", 4.0 * ratio_prefactor(s, n),
                    -t * t * n * s.L2 * s.L2 / (8.0 * A.A * A.A), true);
}

SmallPBounds lp_small_p_bounds(double p, double n, double t) {
  require_small_p(p, "lp_small_p_bounds");
  require_n(n);
  require_t(t, false);
  const GibbsSummary s = lp_closed_forms(p, 1.0);
  const double pre = std::sqrt(2.0 * std::numbers::pi * n / p);
  const double q = t * t * n * s.L2 * s.L2;
  SmallPBounds out{std::nullopt, make_bound("thmD-upper", pre, -q / (2.0 * s.varZ2), true)};
  if (p > 4.0 / 3.0) out.lower = make_bound("thmD-lower", pre, -q / p, true);
  return out;
}

CramerTransform::CramerTransform(const OrliczFunction& f, double R, const QuadratureConfig& cfg)
    : CramerTransform(f, gibbs_summary(f, R, cfg), cfg) {}

CramerTransform::CramerTransform(const OrliczFunction& f, const GibbsSummary& s,
                                 const QuadratureConfig& cfg)
    : f_(f), s_(s), cfg_(cfg) {
  if (!f.growth_class().at_least(2.0)) {
    throw HypothesisError("Cramer rate requires M in Omega(x^2); " + f.spec() +
                          " has growth class " + f.growth_class().to_string());
  }
  u_scale_ = 1.0 / std::sqrt(s_.varZ2);
  locate_domain();
}

double CramerTransform::log_mgf(double u) const {
  if (u == 0.0) return 0.0;
  if (u > 0.0 && u >= u_max_) return kInf;
  const double l = log_tilted_integral_even(
      f_, s_.alpha_star, [u](double x) { return u * x * x; }, {}, cfg_);
  if (!std::isfinite(l)) return kInf;
  return l - s_.phi - u * s_.L2;
}

void CramerTransform::locate_domain() {
  // Only finiteness matters here. An exhausted budget still means the
  // integrand decays, so it counts as finite.
  QuadratureConfig probe = cfg_;
  probe.max_subdivisions = std::min(probe.max_subdivisions, 1024);
  auto log_integral = [&](double u) {
    try {
      return log_tilted_integral_even(
          f_, s_.alpha_star, [u](double x) { return u * x * x; }, {}, probe);
    } catch (const ConvergenceError&) {
      return 0.0;
    }
  };
  double lo = 0.0;
  double u = u_scale_ * 0x1.0p-20;
  for (int k = 0; k < 80; ++k, u *= 2.0) {
    const double l = log_integral(u);
    if (!std::isfinite(l)) {
      if (lo == 0.0) {
        one_sided_ = true;
        u_max_ = 0.0;
        return;
      }
      double hi = u;
      for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::isfinite(log_integral(mid)) ? lo : hi) = mid;
      }
      u_max_ = lo;
      return;
    }
    // Past this size the exponent is beyond double resolution; the domain is
    // taken to be unbounded.
    if (l - s_.phi > kLambdaCeiling) break;
    lo = u;
  }
  u_max_ = kInf;
}

// Maximises g(u) = u s - Lambda(u) over sign * u >= 0.
double CramerTransform::maximise(double s, double sign) const {
  auto g = [&](double v) { return sign * v * s - log_mgf(sign * v); };

  // Bracket the maximiser by doubling; g is concave with g(0) = 0.
  const double cap = sign > 0.0 ? u_max_ : kInf;
  double a = 0.0;
  double b;
  double v = std::min(u_scale_ * 0x1.0p-20, 0.5 * cap);
  double gv = g(v);
  if (!(gv > 0.0)) {
    b = v;
  } else {
    int k = 0;
    while (k < 100) {
      if (2.0 * v >= cap) break;
      const double g2 = g(2.0 * v);
      if (!(g2 > gv)) break;
      v *= 2.0;
      gv = g2;
      ++k;
    }
    a = k == 0 ? 0.0 : 0.5 * v;
    b = std::min(2.0 * v, cap);
  }

  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int i = 0; i < 200 && (b - a) > 1e-15 * std::max(1.0, std::fabs(b)); ++i) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - ratio * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + ratio * (b - a);
      gd = g(d);
    }
  }
  return std::max({0.0, gc, gd});
}

double CramerTransform::legendre(double s) const {
  if (!std::isfinite(s)) throw DomainError("Legendre transform argument must be finite");
  if (s <= -s_.L2) return kInf;
  if (s == 0.0) return 0.0;
  if (s > 0.0) return one_sided_ ? 0.0 : maximise(s, 1.0);
  return maximise(s, -1.0);
}

double CramerTransform::rate(double t) const {
  require_t(t, false);
  const double lower = legendre(-t);
  if (one_sided_) return lower;
  return std::min(legendre(t), lower);
}

double cramer_rate(const OrliczFunction& f, double R, double t, const QuadratureConfig& cfg) {
  return CramerTransform(f, R, cfg).rate(t);
}

double lp_ldp_rate_small_p(double p, double L2, double x) {
  require_small_p(p, "lp_ldp_rate_small_p");
  if (x < L2) return kInf;
  return std::pow(x - L2, p / 2.0) / p;
}

Rate2d rate_2d(const std::array<double, 4>& cov, const Rate2dOptions& opts) {
  if (!(opts.x_lo <= opts.x_hi)) throw DomainError("rate_2d requires x_lo <= x_hi");
  if (opts.y_values.empty()) throw DomainError("rate_2d requires at least one y value");
  const double a = cov[0];
  const double b = 0.5 * (cov[1] + cov[2]);
  const double d = cov[3];
  const double mean = 0.5 * (a + d);
  const double spread = std::hypot(0.5 * (a - d), b);
  const double lmax = mean + spread;
  const double lmin = mean - spread;
  if (!(lmin > 0.0) || !(lmax < 1e12 * lmin)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "covariance is singular or ill-conditioned (eigenvalues " << lmin << ", " << lmax
        << ")";
    throw SingularityError(msg.str());
  }
  const double det = a * d - b * b;
  // Inverse [[p00, p01], [p01, p11]].
  const double p00 = d / det;
  const double p01 = -b / det;
  const double p11 = a / det;

  Rate2d best{kInf, 0.0, 0.0};
  for (double y : opts.y_values) {
    const double x = std::clamp(-p01 * y / p00, opts.x_lo, opts.x_hi);
    const double q = p00 * x * x + 2.0 * p01 * x * y + p11 * y * y;
    if (q < best.rate) best = {q, x, y};
  }
  if (opts.half) best.rate *= 0.5;
  return best;
}

Rate2d rate_2d(const GibbsSummary& s, const Rate2dOptions& opts) { return rate_2d(s.cov, opts); }

ComparisonBounds comparison_bounds(double n, double t, double c) {
  require_n(n);
  require_t(t, false);
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("constant c must be > 0");
  const double sq = std::sqrt(n);
  return {make_bound("lee-vempala", 1.0, -c * std::min(t, t * t) * sq, false),
          make_bound("guedon-milman", 1.0, -c * std::min(t, t * t * t) * sq, false),
          make_bound("schechtman-zinn", 12.0, -c * std::min(t, t * t) * n, false)};
}

RangeDiagnostics tn_range_diagnostics(std::optional<double> p, double n, double t) {
  require_n(n);
  require_t(t, true);
  RangeDiagnostics r;
  r.t_sqrt_n = t * std::sqrt(n);
  r.t = t;
  r.t_quarter = t * std::pow(n, 0.25);
  if (p) {
    if (!(*p >= 1.0) || !(*p < 4.0)) throw DomainError("range diagnostics require 1 <= p < 4");
    r.small_p_upper = t * std::pow(n, (4.0 - 2.0 * *p) / (2.0 * (4.0 - *p)));
    r.small_p_lower = r.t_quarter / std::pow(n, (3.0 * *p - 4.0) / (4.0 * (4.0 - *p)));
  }
  return r;
}

double generalized_gaussian_tail_bound(double p, double a) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("tail bound requires p >= 1");
  if (!(a > 0.0)) throw DomainError("tail bound requires a > 0");
  return std::pow(a, 1.0 - p) * std::exp(-std::pow(a, p) / p);
}

double el_tail_condition(double p, double n, double s_n) {
  require_small_p(p, "el_tail_condition");
  require_n(n);
  if (!(s_n > 0.0) || !std::isfinite(s_n)) throw DomainError("s_n must be > 0");
  const double l2 = lp_closed_forms(p, 1.0).L2;
  const double a = std::sqrt(n) * s_n + l2;
  const double log_norm = std::log(std::pow(p, 1.0 / p)) + std::lgamma(1.0 + 1.0 / p);
  const double chain = std::log(n) - log_norm - 0.5 * (p - 1.0) * std::log(a) -
                       std::pow(a, p / 2.0) / p;
  return chain / (s_n * s_n);
}

}  // namespace orlicz
