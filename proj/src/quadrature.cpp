#include "orlicz_lab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "orlicz_lab/error.hpp"

namespace orlicz {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw DomainError("quadrature rel_tol must lie in (0, 1)");
  }
  if (!(abs_tol > 0.0)) throw DomainError("quadrature abs_tol must be positive");
  if (max_subdivisions < 8) {
    throw DomainError("quadrature max_subdivisions must be at least 8");
  }
  if (!(truncation_margin > 0.0)) {
    throw DomainError("quadrature truncation_margin must be positive");
  }
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod nodes on [0, 1] (index 0 is the centre); the Gauss 10-point nodes
// are the odd Kronrod indices.
struct Gk21Rule {
  std::array<double, 11> x{};
  std::array<double, 11> wk{};
  std::array<double, 5> wg{};

  Gk21Rule() {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& ka = gauss_kronrod<double, 21>::abscissa();
    const auto& kw = gauss_kronrod<double, 21>::weights();
    const auto& gw = gauss<double, 10>::weights();
    for (std::size_t i = 0; i < 11; ++i) {
      x[i] = ka[i];
      wk[i] = kw[i];
    }
    for (std::size_t i = 0; i < 5; ++i) wg[i] = gw[i];
  }
};

const Gk21Rule& rule() {
  static const Gk21Rule r;
  return r;
}

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool splittable;
};

// One GK21 panel with the QUADPACK error heuristic.
Panel gk21(const Integrand& fn, double a, double b) {
  const Gk21Rule& r = rule();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, 11> fl{};
  std::array<double, 11> fr{};
  const double fc = fn(centre);
  double kron = fc * r.wk[0];
  double gauss = 0.0;
  double absk = std::fabs(kron);
  for (std::size_t i = 1; i < 11; ++i) {
    const double dx = half * r.x[i];
    fl[i] = fn(centre - dx);
    fr[i] = fn(centre + dx);
    const double pair = fl[i] + fr[i];
    kron += r.wk[i] * pair;
    absk += r.wk[i] * (std::fabs(fl[i]) + std::fabs(fr[i]));
    if (i % 2 == 1) gauss += r.wg[i / 2] * pair;
  }
  const double mean = 0.5 * kron;
  double asc = r.wk[0] * std::fabs(fc - mean);
  for (std::size_t i = 1; i < 11; ++i) {
    asc += r.wk[i] * (std::fabs(fl[i] - mean) + std::fabs(fr[i] - mean));
  }

  const double value = kron * half;
  const double resabs = absk * std::fabs(half);
  const double resasc = asc * std::fabs(half);
  double err = std::fabs((kron - gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  if (!std::isfinite(value)) err = std::numeric_limits<double>::infinity();

  const bool splittable = std::fabs(half) > 100.0 * kEps * std::max(1.0, std::fabs(centre));
  return {a, b, value, err, splittable};
}

// Identical for a panel and its reflection through 0, and distinct for
// disjoint panels; orders refinement ties and the final summation so that
// mirrored segments produce exactly negated or equal sums.
double mirror_key(const Panel& p) { return std::fabs(p.a) + std::fabs(p.b); }

QuadratureResult integrate_segment(const Integrand& fn, double a, double b,
                                   const QuadratureConfig& cfg) {
  if (a == b) return {};
  auto worse = [](const Panel& l, const Panel& r) {
    // Frozen panels sort below every refinable one.
    if (l.splittable != r.splittable) return !l.splittable;
    if (l.error != r.error) return l.error < r.error;
    return mirror_key(l) > mirror_key(r);
  };

  std::vector<Panel> heap;
  heap.reserve(64);
  heap.push_back(gk21(fn, a, b));
  double total = heap.front().value;
  double total_err = heap.front().error;

  int subdivisions = 1;
  while (true) {
    const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total));
    if (total_err <= target) break;
    const Panel worst = heap.front();
    if (!worst.splittable) break;  // roundoff floor reached everywhere
    if (subdivisions >= cfg.max_subdivisions) {
      throw ConvergenceError(
          "quadrature subdivision budget (" + std::to_string(cfg.max_subdivisions) +
              ") exhausted on [" + std::to_string(a) + ", " + std::to_string(b) + "]",
          total, total_err);
    }
    std::pop_heap(heap.begin(), heap.end(), worse);
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gk21(fn, worst.a, mid);
    const Panel right = gk21(fn, mid, worst.b);
    total += left.value + right.value - worst.value;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), worse);
    ++subdivisions;

    // Re-sum to keep the running totals free of cancellation drift.
    if (subdivisions % 64 == 0) {
      total = 0.0;
      total_err = 0.0;
      for (const auto& p : heap) {
        total += p.value;
        total_err += p.error;
      }
    } else {
      total_err += left.error + right.error - worst.error;
    }
  }

  std::sort(heap.begin(), heap.end(),
            [](const Panel& l, const Panel& r) { return mirror_key(l) < mirror_key(r); });
  QuadratureResult out;
  for (const auto& p : heap) {
    out.value += p.value;
    out.abs_error += p.error;
  }
  out.subdivisions = subdivisions;
  return out;
}

}  // namespace

QuadratureResult integrate(const Integrand& fn, std::span<const double> breakpoints,
                           const QuadratureConfig& cfg) {
  cfg.validate();
  if (breakpoints.size() < 2) {
    throw DomainError("integrate needs at least two breakpoints");
  }
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end())) {
    throw DomainError("integration breakpoints must be sorted");
  }
  QuadratureResult out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const auto part = integrate_segment(fn, breakpoints[i], breakpoints[i + 1], cfg);
    out.value += part.value;
    out.abs_error += part.abs_error;
    out.subdivisions += part.subdivisions;
  }
  return out;
}

QuadratureResult integrate(const Integrand& fn, double a, double b,
                           const QuadratureConfig& cfg) {
  const std::array<double, 2> bp = {a, b};
  return integrate(fn, bp, cfg);
}

double truncation_point(const OrliczFunction& f, double alpha,
                        const QuadratureConfig& cfg) {
  if (!(alpha < 0.0)) throw DomainError("truncation_point requires alpha < 0");
  cfg.validate();
  const double level = cfg.truncation_margin / -alpha;

  double hi = 1.0;
  int doublings = 0;
  while (!(f(hi) >= level)) {
    hi *= 2.0;
    if (++doublings > 1000) {
      throw NoTruncationError("potential " + f.spec() +
                              " stays below the truncation level; M appears bounded");
    }
  }
  double lo = 0.5 * hi;
  while (f(lo) >= level) {
    hi = lo;
    lo *= 0.5;
    if (lo < std::numeric_limits<double>::min()) {
      throw NoTruncationError("truncation level reached arbitrarily close to 0");
    }
  }
  for (int i = 0; i < 200 && hi - lo > 4.0 * kEps * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= level ? hi : lo) = mid;
  }
  return hi;
}

double tilted_integral(const OrliczFunction& f, double alpha, const Integrand& g,
                       Parity parity, const QuadratureConfig& cfg) {
  if (!(alpha < 0.0)) throw DomainError("tilted_integral requires alpha < 0");
  if (parity == Parity::odd) return 0.0;
  const double xt = truncation_point(f, alpha, cfg);
  const Integrand integrand = [&](double x) {
    return g(x) * std::exp(alpha * f(x));
  };
  if (parity == Parity::even) {
    return 2.0 * integrate(integrand, 0.0, xt, cfg).value;
  }
  const std::array<double, 3> bp = {-xt, 0.0, xt};
  return integrate(integrand, bp, cfg).value;
}

double log_tilted_integral_even(const OrliczFunction& f, double alpha,
                                const Integrand& log_weight,
                                std::span<const double> kinks,
                                const QuadratureConfig& cfg) {
  if (!(alpha < 0.0)) throw DomainError("log_tilted_integral_even requires alpha < 0");
  cfg.validate();
  auto h = [&](double x) { return alpha * f(x) + log_weight(x); };

  // Geometric scan for the peak and for the point beyond which the exponent
  // stays a full margin below it.
  const double scale = truncation_point(f, alpha, QuadratureConfig{.truncation_margin = 1.0});
  double peak = h(0.0);
  double peak_x = 0.0;
  double x = scale / 1024.0;
  double prev = peak;
  double upper = 0.0;
  for (int k = 0; k < 400; ++k, x *= 1.25) {
    const double hx = h(x);
    if (std::isnan(hx)) break;
    if (hx == std::numeric_limits<double>::infinity()) {
      return std::numeric_limits<double>::infinity();
    }
    if (hx > peak) {
      peak = hx;
      peak_x = x;
    }
    if (hx < peak - cfg.truncation_margin && hx < prev) {
      upper = x;
      break;
    }
    prev = hx;
  }
  if (upper == 0.0) return std::numeric_limits<double>::infinity();

  // The exponent must stay below the cut beyond `upper`; a later rise means
  // the weight outgrows alpha M and the integral diverges.
  x = upper;
  for (int k = 0; k < 400; ++k) {
    x *= 1.25;
    const double hx = h(x);
    if (std::isnan(hx) || hx == -std::numeric_limits<double>::infinity()) break;
    if (hx > peak - cfg.truncation_margin) return std::numeric_limits<double>::infinity();
  }

  // Refine the shift on a uniform grid; it only has to prevent overflow.
  for (int i = 1; i < 256; ++i) {
    const double xi = upper * i / 256.0;
    const double hx = h(xi);
    if (hx > peak) {
      peak = hx;
      peak_x = xi;
    }
  }
  // A sharp peak can sit far above its grid neighbours; polish it by
  // golden-section search on the adjacent cells.
  {
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = std::max(0.0, peak_x - upper / 256.0);
    double b = std::min(upper, peak_x + upper / 256.0);
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double hc = h(c);
    double hd = h(d);
    for (int i = 0; i < 100 && b - a > 4.0 * kEps * std::max(1.0, b); ++i) {
      if (hc > hd) {
        b = d;
        d = c;
        hd = hc;
        c = b - ratio * (b - a);
        hc = h(c);
      } else {
        a = c;
        c = d;
        hc = hd;
        d = a + ratio * (b - a);
        hd = h(d);
      }
    }
    for (const auto& [xc, hv] : {std::pair{c, hc}, std::pair{d, hd}}) {
      if (hv > peak) {
        peak = hv;
        peak_x = xc;
      }
    }
  }

  std::vector<double> bp = {0.0, upper};
  for (double k : kinks) {
    if (k > 0.0 && k < upper) bp.push_back(k);
  }
  if (peak_x > 0.0 && peak_x < upper) bp.push_back(peak_x);
  // Breakpoints at multiples of the distance over which the exponent drops by
  // one on each side keep a narrow spike visible to the panels.
  for (double side : {-1.0, 1.0}) {
    double w = 1e-12 * std::max(1.0, peak_x);
    while (w < upper && h(peak_x + side * w) > peak - 1.0) w *= 2.0;
    for (double m : {1.0, 4.0, 16.0}) {
      const double b = peak_x + side * m * w;
      if (b > 0.0 && b < upper) bp.push_back(b);
    }
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  // Rounding in alpha M + log_weight limits the attainable relative accuracy.
  QuadratureConfig local = cfg;
  const double noise =
      64.0 * kEps * (std::fabs(alpha * f(peak_x)) + std::fabs(log_weight(peak_x)));
  local.rel_tol = std::min(0.5, std::max(cfg.rel_tol, noise));

  const Integrand shifted = [&](double t) { return std::exp(h(t) - peak); };
  const double value = integrate(shifted, bp, local).value;
  return std::log(2.0 * value) + peak;
}

}  // namespace orlicz
