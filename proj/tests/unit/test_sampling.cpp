#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "generators.hpp"
#include "orlicz_lab/error.hpp"
#include "orlicz_lab/quadrature.hpp"
#include "orlicz_lab/sampling.hpp"

using namespace orlicz;

namespace {

struct Moments {
  double mean;
  double se;
};

template <class G>
Moments moment(const std::vector<double>& xs, G g) {
  double s = 0.0;
  double ss = 0.0;
  for (double x : xs) {
    const double v = g(x);
    s += v;
    ss += v * v;
  }
  const double n = static_cast<double>(xs.size());
  const double mean = s / n;
  return {mean, std::sqrt((ss / n - mean * mean) / n)};
}

// Inverse CDF of the Gibbs density tabulated from quadrature on [0, X_T].
class TabulatedGibbs {
 public:
  TabulatedGibbs(const OrliczFunction& f, double alpha, int cells = 4000) {
    const double xt = truncation_point(f, alpha);
    const Integrand dens = [&](double x) { return std::exp(alpha * f(x)); };
    x_.push_back(0.0);
    cdf_.push_back(0.0);
    for (int i = 1; i <= cells; ++i) {
      const double b = xt * i / cells;
      cdf_.push_back(cdf_.back() + integrate(dens, x_.back(), b).value);
      x_.push_back(b);
    }
    for (double& c : cdf_) c /= cdf_.back();
  }

  double draw(Rng& rng) {
    const double u = uniform01(rng);
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - cdf_.begin()));
    const double frac = (u - cdf_[i - 1]) / (cdf_[i] - cdf_[i - 1]);
    const double x = x_[i - 1] + frac * (x_[i] - x_[i - 1]);
    return uniform01(rng) < 0.5 ? -x : x;
  }

 private:
  std::vector<double> x_;
  std::vector<double> cdf_;
};

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                              static_cast<double>(j) / b.size()));
  }
  return d;
}

bool cis_overlap(const MonteCarloEstimate& a, const MonteCarloEstimate& b) {
  return a.ci_low <= b.ci_high && b.ci_low <= a.ci_high;
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("block seeding is fixed") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(block_seed(42, 0) != block_seed(42, 1));
  CHECK(block_seed(42, 7) == splitmix64(splitmix64(42) ^ 7));
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(rng);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("Gibbs draws have the textbook moments") {
  auto xs = sample_gibbs(OrliczFunction::power(2.0), 1.0, 1'000'000, 11);
  auto m = moment(xs, [](double x) { return x * x; });
  CHECK(std::fabs(m.mean - 1.0) < 4.0 * m.se);
  xs = sample_gibbs(OrliczFunction::power(1.0), 1.0, 1'000'000, 12);
  m = moment(xs, [](double x) { return x * x; });
  CHECK(std::fabs(m.mean - 2.0) < 4.0 * m.se);
  const auto c = OrliczFunction::coshm1();
  xs = sample_gibbs(c, 1.0, 1'000'000, 13);
  m = moment(xs, [&c](double x) { return c(x); });
  CHECK(std::fabs(m.mean - 1.0) < 4.0 * m.se);
}

TEST_CASE("envelope acceptance rates") {
  GibbsSampler gauss(OrliczFunction::power(2.0), -0.5);
  Rng rng(3);
  for (int i = 0; i < 200000; ++i) gauss.draw(rng);
  const double rate = static_cast<double>(gauss.accepted()) / gauss.proposals();
  CHECK(rate == doctest::Approx(std::sqrt(2.0 * std::numbers::pi) / gauss.envelope_mass())
                    .epsilon(0.01));
  CHECK(rate > 0.74);
  // Tails carry half the envelope.
  CHECK(gauss.envelope_mass() == doctest::Approx(4.0 * gauss.x0()).epsilon(1e-9));
}

TEST_CASE("degenerate envelope is a construction error") {
  // Convex but flat: zero subgradient everywhere the tail condition is tested.
  const auto flat = OrliczFunction::custom(
      "flat", [](double x) { return x * x; }, [](double) { return 0.0; },
      GrowthClass::power(2.0));
  CHECK_THROWS_AS(GibbsSampler(flat, -0.5), ConstructionError);
}

TEST_CASE("inefficient target is an efficiency error") {
  // A valid but tiny subgradient inflates the envelope tails, which pushes
  // x0 far beyond the width 1e-6 of the target.
  const auto spike = OrliczFunction::custom(
      "spike", [](double x) { return 1e6 * std::fabs(x); },
      [](double x) { return x == 0.0 ? 0.0 : std::copysign(1e-300, x); }, GrowthClass::power(1.0));
  GibbsSampler sampler(spike, -1.0);
  Rng rng(5);
  CHECK_THROWS_AS(
      [&] {
        for (int i = 0; i < 1000; ++i) sampler.draw(rng);
      }(),
      EfficiencyError);
}

TEST_CASE("determinism and independence from the worker count") {
  const auto f = OrliczFunction::mix(1.0, 3.0, 0.5);
  ::setenv("ORLICZ_LAB_THREADS", "1", 1);
  const auto a = sample_gibbs(f, 1.0, 300'000, 99);
  const auto ea = thinshell_probability_is(f, 1.0, 10, 0.5, 200'000, 7);
  ::setenv("ORLICZ_LAB_THREADS", "4", 1);
  const auto b = sample_gibbs(f, 1.0, 300'000, 99);
  const auto eb = thinshell_probability_is(f, 1.0, 10, 0.5, 200'000, 7);
  ::unsetenv("ORLICZ_LAB_THREADS");
  CHECK(a == b);
  CHECK(ea.value == eb.value);
  CHECK(ea.std_error == eb.std_error);
  CHECK(sample_gibbs(f, 1.0, 1000, 100) != sample_gibbs(f, 1.0, 1000, 101));
}

TEST_CASE("property: KS test against a tabulated inverse CDF") {
  // Two-sample critical value at significance 0.001 for 1e5 vs 1e5 draws.
  const double crit = std::sqrt(-0.5 * std::log(0.0005)) * std::sqrt(2.0 / 1e5);
  for (const auto& f : {OrliczFunction::power(1.0), OrliczFunction::power(1.5),
                        OrliczFunction::power(2.0), OrliczFunction::power(4.0),
                        OrliczFunction::mix(1.0, 2.0, 0.5), OrliczFunction::coshm1(),
                        OrliczFunction::expsq()}) {
    CAPTURE(f.spec());
    const double alpha = solve_alpha_star(f, 1.0);
    const auto draws = sample_gibbs(f, 1.0, 100'000, 2024);
    TabulatedGibbs table(f, alpha);
    Rng rng(77);
    std::vector<double> ref(100'000);
    for (double& x : ref) x = table.draw(rng);
    const double d = ks_two_sample(draws, ref);
    CAPTURE(d);
    CHECK(d < crit);
  }
}

TEST_CASE("property: draws are sign symmetric") {
  gen::Source src(0x5167);
  for (int k = 0; k < 6; ++k) {
    const auto f = OrliczFunction::mix(src.uniform(1.0, 4.0), src.uniform(1.0, 4.0),
                                       src.uniform(0.0, 1.0));
    CAPTURE(f.spec());
    const auto xs = sample_gibbs(f, src.log_uniform(0.2, 5.0), 200'000, 500 + k);
    const auto m = moment(xs, [](double x) { return x; });
    CHECK(std::fabs(m.mean) < 4.0 * m.se);
  }
}

TEST_CASE("property: importance weights lie in [0, 1]") {
  gen::Source src(0x3e16);
  for (int k = 0; k < 10000; ++k) {
    const double alpha = -src.log_uniform(1e-3, 1e3);
    const double s1 = src.uniform(-1e3, 1e3);
    const double w = importance_weight(alpha, s1);
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
    if (s1 > 0.0) CHECK(w == 0.0);
  }
}

TEST_CASE("exact sampler in one dimension is uniform on [-1, 1]") {
  std::vector<double> xs;
  for (std::uint64_t s = 0; s < 20000; ++s) xs.push_back(sample_lp_uniform_exact(2.0, 1, 1.0, s)[0]);
  for (double x : xs) CHECK(std::fabs(x) <= 1.0);
  auto m = moment(xs, [](double x) { return x; });
  CHECK(std::fabs(m.mean) < 4.0 * m.se);
  m = moment(xs, [](double x) { return x * x; });
  CHECK(std::fabs(m.mean - 1.0 / 3.0) < 4.0 * m.se);
}

TEST_CASE("exact sampler on the cross-polytope matches area ratios") {
  // Regions of |x1| + |x2| <= 2: four vertex caps {|x_i| >= 1} of area 1
  // each and the central square of area 4, out of 8.
  Rng rng(8);
  std::vector<double> x(2);
  std::array<double, 5> counts{};
  const int N = 100'000;
  for (int i = 0; i < N; ++i) {
    sample_lp_uniform_exact(1.0, 2.0, rng, x);
    CHECK(std::fabs(x[0]) + std::fabs(x[1]) <= 2.0 + 1e-12);
    if (x[0] >= 1) {
      counts[0] += 1;
    } else if (x[0] <= -1) {
      counts[1] += 1;
    } else if (x[1] >= 1) {
      counts[2] += 1;
    } else if (x[1] <= -1) {
      counts[3] += 1;
    } else {
      counts[4] += 1;
    }
  }
  const std::array<double, 5> expected = {N / 8.0, N / 8.0, N / 8.0, N / 8.0, N / 2.0};
  double chi2 = 0.0;
  for (int i = 0; i < 5; ++i) chi2 += std::pow(counts[i] - expected[i], 2) / expected[i];
  // 0.999 quantile of chi-square with 4 degrees of freedom.
  CHECK(chi2 < 18.467);
}

TEST_CASE("exact sampler second moment in the Euclidean ball") {
  const auto est = mean_sq_norm_exact(2.0, 1.0, 10, 100'000, 5);
  // E||X||^2 = n r^2 / (n + 2) with r^2 = 10.
  const double exact = 10.0 * 10.0 / 12.0 / 10.0;
  CHECK(std::fabs(est.value - exact) < 4.0 * est.std_error);
}

TEST_CASE("property: exact samples stay in the ball") {
  gen::Source src(0xba11);
  for (int k = 0; k < 200; ++k) {
    const double p = src.uniform(1.0, 6.0);
    const int n = src.integer(1, 40);
    const double rp = src.log_uniform(0.1, 100.0);
    const auto x = sample_lp_uniform_exact(p, n, rp, 1000 + k);
    double s = 0.0;
    for (double v : x) s += std::pow(std::fabs(v), p);
    CHECK(s <= rp * (1.0 + 1e-12));
  }
}

TEST_CASE("importance sampling agrees with the exact sampler") {
  auto is = thinshell_probability_is(OrliczFunction::power(2.0), 1.0, 20, 0.3, 1'000'000, 1);
  auto ex = thinshell_probability_exact(2.0, 1.0, 20, 0.3, 1'000'000, 2);
  CAPTURE(is.value);
  CAPTURE(ex.value);
  CHECK(cis_overlap(is, ex));
  CHECK_FALSE(is.unreliable);
  is = thinshell_probability_is(OrliczFunction::power(1.0), 1.0, 50, 0.5, 1'000'000, 3);
  ex = thinshell_probability_exact(1.0, 1.0, 50, 0.5, 1'000'000, 4);
  CAPTURE(is.value);
  CAPTURE(ex.value);
  CHECK(cis_overlap(is, ex));
}

TEST_CASE("empty event gives zero") {
  const auto est = thinshell_probability_is(OrliczFunction::power(2.0), 1.0, 20, 1e3, 10'000, 1);
  CHECK(est.value == 0.0);
  CHECK(est.unreliable);
  const auto c = thinshell_probability_is(OrliczFunction::coshm1(), 1.0, 5, 1e3, 10'000, 1);
  CHECK(c.value == 0.0);
}

TEST_CASE("estimator preconditions") {
  const auto f = OrliczFunction::power(2.0);
  CHECK_THROWS_AS(thinshell_probability_is(f, 1.0, 10, 0.1, 999, 1), DomainError);
  CHECK_THROWS_AS(thinshell_probability_is(f, 1.0, 0, 0.1, 1000, 1), DomainError);
  CHECK_THROWS_AS(thinshell_probability_is(f, 1.0, 10, 0.0, 1000, 1), DomainError);
  CHECK_THROWS_AS(sample_lp_uniform_exact(0.5, 3, 1.0, 1), DomainError);
}

TEST_CASE("property: estimate records satisfy their invariants") {
  gen::Source src(0xe57);
  for (int k = 0; k < 12; ++k) {
    CAPTURE(k);
    const auto f = OrliczFunction::mix(src.uniform(1.0, 3.0), src.uniform(1.0, 3.0),
                                       src.uniform(0.0, 1.0));
    const int n = src.integer(2, 30);
    const auto est = thinshell_probability_is(f, 1.0, n, src.uniform(0.05, 1.0), 20'000, k);
    CHECK(est.ci_low <= est.value);
    CHECK(est.value <= est.ci_high);
    CHECK(est.std_error >= 0.0);
    CHECK(est.effective_sample_size <= static_cast<double>(est.n_samples));
    CHECK(est.value >= 0.0);
    CHECK(est.value <= 1.0);
  }
}

TEST_CASE("bootstrap interval") {
  const auto f = OrliczFunction::power(1.0);
  const auto delta = thinshell_probability_is(f, 1.0, 20, 0.5, 20'000, 9);
  const auto boot = thinshell_probability_is(f, 1.0, 20, 0.5, 20'000, 9, {.bootstrap = true});
  CHECK(boot.value == delta.value);
  CHECK(boot.ci_low <= boot.value);
  CHECK(boot.value <= boot.ci_high);
  CHECK(boot.std_error == doctest::Approx(delta.std_error).epsilon(0.2));
}

TEST_CASE("normalization identity") {
  auto c = normalization_check(OrliczFunction::power(2.0), 1.0, 100, 10'000'000, 1);
  CHECK(c.theory == doctest::Approx(2.0 / std::sqrt(400.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(c.ratio >= 0.9);
  CHECK(c.ratio <= 1.1);
  c = normalization_check(OrliczFunction::power(1.0), 1.0, 100, 1'000'000, 2);
  CHECK(c.ratio >= 0.85);
  CHECK(c.ratio <= 1.15);
  // A general family goes through per-coordinate draws.
  c = normalization_check(OrliczFunction::coshm1(), 1.0, 50, 100'000, 3);
  CHECK(c.ratio >= 0.8);
  CHECK(c.ratio <= 1.2);
}

TEST_CASE("mean squared norm") {
  const auto f2 = OrliczFunction::power(2.0);
  const auto is = mean_sq_norm_estimate(f2, 1.0, 50, 1'000'000, 1);
  const auto ex = mean_sq_norm_exact(2.0, 1.0, 50, 1'000'000, 2);
  CHECK(cis_overlap(is, ex));
  double prev = 0.0;
  for (int n : {50, 200, 800}) {
    const auto e = mean_sq_norm_estimate(f2, 1.0, n, 1'000'000, n);
    CAPTURE(n);
    CHECK(e.value > prev);
    CHECK(e.value < 1.0 + 3.0 * e.std_error);
    prev = e.value;
  }
  const auto l1 = mean_sq_norm_estimate(OrliczFunction::power(1.0), 1.0, 200, 200'000, 4);
  CHECK(std::fabs(l1.value - 2.0) < 0.06);
}

}  // TEST_SUITE
