#include "orlicz_lab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "orlicz_lab/error.hpp"

namespace orlicz {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr std::uint64_t kEfficiencyWindow = 100000;
constexpr double kMinAcceptance = 1e-3;
constexpr double kReliableCount = 30.0;
constexpr double kRareEvent = 1e-6;

void require_dimension(int n) {
  if (n < 1) throw DomainError("dimension n must be at least 1");
}

void require_samples(std::uint64_t samples, std::uint64_t minimum) {
  if (samples < minimum) {
    throw DomainError("at least " + std::to_string(minimum) + " samples are required");
  }
}

void require_lp(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("l_p sampler requires p >= 1");
}

}  // namespace

GibbsSampler::GibbsSampler(OrliczFunction f, double alpha) : f_(std::move(f)), alpha_(alpha) {
  if (!(alpha < 0.0)) throw DomainError("Gibbs sampler requires alpha < 0");
  const double inv = 1.0 / -alpha;
  auto tail_mass = [&](double x) {
    const double s = f_.subgradient(x);
    if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
    return std::exp(alpha * f_(x)) * inv / s;
  };

  // tail_mass - x is decreasing; bracket its root.
  double lo = 0.0;
  double hi = truncation_point(f_, alpha);
  for (int i = 0; i < 200 && tail_mass(hi) > hi; ++i) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail_mass(mid) > mid ? lo : hi) = mid;
  }
  x0_ = hi;
  slope_ = f_.subgradient(x0_);
  if (!(slope_ > 0.0) || !std::isfinite(slope_)) {
    throw ConstructionError("rejection envelope for " + f_.spec() +
                            " is degenerate: subgradient at x0 = " + std::to_string(x0_) +
                            " is not positive");
  }
  m0_ = f_(x0_);
  tail_ = std::exp(alpha * m0_) * inv / slope_;
  centre_prob_ = x0_ / (x0_ + tail_);
}

double GibbsSampler::draw(Rng& rng) {
  while (true) {
    ++proposals_;
    if (++window_proposals_ == kEfficiencyWindow) {
      if (static_cast<double>(window_accepted_) <
          kMinAcceptance * static_cast<double>(kEfficiencyWindow)) {
        throw EfficiencyError("rejection sampler for " + f_.spec() + " accepted " +
                              std::to_string(window_accepted_) + " of " +
                              std::to_string(kEfficiencyWindow) + " proposals");
      }
      window_proposals_ = 0;
      window_accepted_ = 0;
    }

    double x;
    double log_ratio;
    if (uniform01(rng) < centre_prob_) {
      x = x0_ * (2.0 * uniform01(rng) - 1.0);
      log_ratio = alpha_ * f_(x);
    } else {
      const double ax = x0_ - std::log(uniform01(rng)) / (-alpha_ * slope_);
      log_ratio = alpha_ * (f_(ax) - m0_ - slope_ * (ax - x0_));
      x = uniform01(rng) < 0.5 ? -ax : ax;
    }
    if (uniform01(rng) <= std::exp(log_ratio)) {
      ++accepted_;
      ++window_accepted_;
      return x;
    }
  }
}

std::vector<double> sample_gibbs(const OrliczFunction& f, double R, std::uint64_t count,
                                 std::uint64_t seed) {
  require_samples(count, 1);
  const GibbsSampler proto(f, solve_alpha_star(f, R));
  return run_blocks<std::vector<double>>(
      count, seed,
      [&proto](Rng& rng, std::uint64_t k, std::vector<double>& out) {
        GibbsSampler sampler = proto;
        out.reserve(k);
        for (std::uint64_t i = 0; i < k; ++i) out.push_back(sampler.draw(rng));
      },
      [](std::vector<double>& acc, const std::vector<double>& part) {
        acc.insert(acc.end(), part.begin(), part.end());
      });
}

double draw_generalized_gaussian(double p, Rng& rng) {
  double magnitude;
  if (p == 1.0) {
    magnitude = -std::log(uniform01(rng));
  } else {
    std::gamma_distribution<double> gamma(1.0 / p, 1.0);
    magnitude = std::pow(p * gamma(rng), 1.0 / p);
  }
  return uniform01(rng) < 0.5 ? -magnitude : magnitude;
}

void sample_lp_uniform_exact(double p, double radius_power, Rng& rng, std::vector<double>& out) {
  double norm_p = 0.0;
  for (double& g : out) {
    g = draw_generalized_gaussian(p, rng);
    norm_p += std::pow(std::fabs(g), p);
  }
  const double n = static_cast<double>(out.size());
  const double scale = std::pow(radius_power / norm_p, 1.0 / p) * std::pow(uniform01(rng), 1.0 / n);
  for (double& g : out) g *= scale;
}

std::vector<double> sample_lp_uniform_exact(double p, int n, double radius_power,
                                            std::uint64_t seed) {
  require_lp(p);
  require_dimension(n);
  if (!(radius_power > 0.0)) throw DomainError("radius_power must be positive");
  Rng rng(block_seed(seed, 0));
  std::vector<double> out(static_cast<std::size_t>(n));
  sample_lp_uniform_exact(p, radius_power, rng, out);
  return out;
}

namespace {

// Sums for the ratio estimator sum(a) / sum(b) with b = chi(S1 <= 0) e^{-alpha* S1}.
struct RatioStats {
  std::uint64_t count = 0;
  std::uint64_t hits = 0;  // samples with a > 0
  double sa = 0.0;
  double sb = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  double sab = 0.0;
  std::vector<std::pair<double, double>> kept;  // nonzero (a, b), bootstrap only

  void add(double a, double b, bool keep) {
    ++count;
    if (b == 0.0) return;
    if (a != 0.0) ++hits;
    sa += a;
    sb += b;
    saa += a * a;
    sbb += b * b;
    sab += a * b;
    if (keep) kept.emplace_back(a, b);
  }
};

void merge_ratio(RatioStats& acc, const RatioStats& part) {
  acc.count += part.count;
  acc.hits += part.hits;
  acc.sa += part.sa;
  acc.sb += part.sb;
  acc.saa += part.saa;
  acc.sbb += part.sbb;
  acc.sab += part.sab;
  acc.kept.insert(acc.kept.end(), part.kept.begin(), part.kept.end());
}

void percentile_bootstrap(const RatioStats& st, std::uint64_t seed, int resamples,
                          MonteCarloEstimate& est) {
  if (resamples < 2) throw DomainError("bootstrap needs at least 2 resamples");
  Rng rng(block_seed(seed, std::numeric_limits<std::uint64_t>::max()));
  const std::uint64_t k = st.kept.size();
  std::uniform_int_distribution<std::uint64_t> pick(0, st.count - 1);
  std::vector<double> reps;
  reps.reserve(static_cast<std::size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    double sa = 0.0;
    double sb = 0.0;
    for (std::uint64_t i = 0; i < st.count; ++i) {
      const std::uint64_t j = pick(rng);
      if (j < k) {
        sa += st.kept[j].first;
        sb += st.kept[j].second;
      }
    }
    if (sb > 0.0) reps.push_back(sa / sb);
  }
  if (reps.size() < 2) throw DegenerateEstimateError("bootstrap resamples carry no weight");
  double mean = 0.0;
  for (double v : reps) mean += v;
  mean /= static_cast<double>(reps.size());
  double var = 0.0;
  for (double v : reps) var += (v - mean) * (v - mean);
  est.std_error = std::sqrt(var / static_cast<double>(reps.size() - 1));
  std::sort(reps.begin(), reps.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(reps.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return i + 1 < reps.size() ? reps[i] * (1.0 - frac) + reps[i + 1] * frac : reps[i];
  };
  est.ci_low = std::min(quantile(0.025), est.value);
  est.ci_high = std::max(quantile(0.975), est.value);
}

MonteCarloEstimate finish_ratio(const RatioStats& st, std::uint64_t seed,
                                const SamplingOptions& opts) {
  if (!(st.sb > 0.0)) {
    throw DegenerateEstimateError("no sample satisfied sum M(Z_i) <= nR; the denominator is zero");
  }
  MonteCarloEstimate est;
  est.n_samples = st.count;
  est.seed = seed;
  const double N = static_cast<double>(st.count);
  est.value = st.sa / st.sb;
  const double bbar = st.sb / N;
  const double r = est.value;
  const double resid = std::max(0.0, st.saa - 2.0 * r * st.sab + r * r * st.sbb);
  est.std_error = std::sqrt(resid / (N - 1.0) / N) / bbar;
  est.ci_low = est.value - kZ95 * est.std_error;
  est.ci_high = est.value + kZ95 * est.std_error;
  est.effective_sample_size = st.sb * st.sb / st.sbb;
  est.unreliable = est.effective_sample_size < kReliableCount;
  if (opts.bootstrap) percentile_bootstrap(st, seed, opts.bootstrap_resamples, est);
  return est;
}

// Draws (S1, S2) = (sum M(Z_i) - nR, sum Z_i^2 - n L2) for i.i.d. Gibbs Z_i.
class ShellSums {
 public:
  ShellSums(const OrliczFunction& f, const GibbsSummary& s, int n)
      : sampler_(f, s.alpha_star), f_(f), n_(n), R_(s.R), L2_(s.L2) {
    if (const auto p = f.power_exponent()) {
      power_ = *p;
      // S1 + nR = sum |Z_i|^p ~ Gamma(n / p, p R).
      gamma_ = std::gamma_distribution<double>(n / power_, power_ * R_);
    }
  }

  /// True when S2 is a function of S1 (M(x) = x^2, where L2 = R).
  bool s2_from_s1() const { return power_ == 2.0; }
  bool s1_direct() const { return power_ > 0.0; }

  double draw_s1(Rng& rng) { return gamma_(rng) - n_ * R_; }

  std::pair<double, double> draw(Rng& rng) {
    if (s2_from_s1()) {
      const double total = gamma_(rng);
      return {total - n_ * R_, total - n_ * L2_};
    }
    double s1 = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < n_; ++i) {
      const double z = sampler_.draw(rng);
      s1 += f_(z) - R_;
      s2 += z * z - L2_;
    }
    return {s1, s2};
  }

  double draw_s1_any(Rng& rng) { return s1_direct() ? draw_s1(rng) : draw(rng).first; }

 private:
  GibbsSampler sampler_;
  OrliczFunction f_;
  double n_;
  double R_;
  double L2_;
  double power_ = 0.0;
  std::gamma_distribution<double> gamma_;
};

}  // namespace

MonteCarloEstimate thinshell_probability_is(const OrliczFunction& f, double R, int n,
                                            double t, std::uint64_t samples,
                                            std::uint64_t seed, const SamplingOptions& opts) {
  require_dimension(n);
  require_samples(samples, 1000);
  if (!(t > 0.0)) throw DomainError("deviation t must be positive");
  const GibbsSummary s = gibbs_summary(f, R);
  const ShellSums proto(f, s, n);
  const double threshold = n * t;
  const double alpha = s.alpha_star;

  const RatioStats st = run_blocks<RatioStats>(
      samples, seed,
      [&](Rng& rng, std::uint64_t k, RatioStats& out) {
        ShellSums sums = proto;
        for (std::uint64_t i = 0; i < k; ++i) {
          const auto [s1, s2] = sums.draw(rng);
          const double b = importance_weight(alpha, s1);
          out.add(std::fabs(s2) >= threshold ? b : 0.0, b, opts.bootstrap);
        }
      },
      merge_ratio);

  MonteCarloEstimate est = finish_ratio(st, seed, opts);
  const double dn = static_cast<double>(n);
  const double theory = std::fabs(alpha) * std::sqrt(2.0 * std::numbers::pi * dn * s.phi2) *
                        std::exp(-dn * t * t / (2.0 * s.varZ2));
  est.unreliable = est.unreliable || static_cast<double>(st.hits) < kReliableCount ||
                   theory < kRareEvent;
  return est;
}

MonteCarloEstimate mean_sq_norm_estimate(const OrliczFunction& f, double R, int n,
                                         std::uint64_t samples, std::uint64_t seed,
                                         const SamplingOptions& opts) {
  require_dimension(n);
  require_samples(samples, 1000);
  const GibbsSummary s = gibbs_summary(f, R);
  const ShellSums proto(f, s, n);
  const double alpha = s.alpha_star;
  const double dn = static_cast<double>(n);

  const RatioStats st = run_blocks<RatioStats>(
      samples, seed,
      [&](Rng& rng, std::uint64_t k, RatioStats& out) {
        ShellSums sums = proto;
        for (std::uint64_t i = 0; i < k; ++i) {
          const auto [s1, s2] = sums.draw(rng);
          const double b = importance_weight(alpha, s1);
          out.add(b * (s2 / dn + s.L2), b, opts.bootstrap);
        }
      },
      merge_ratio);
  return finish_ratio(st, seed, opts);
}

namespace {

struct MomentStats {
  std::uint64_t count = 0;
  std::uint64_t hits = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
};

void merge_moments(MomentStats& acc, const MomentStats& part) {
  acc.count += part.count;
  acc.hits += part.hits;
  acc.sum += part.sum;
  acc.sum_sq += part.sum_sq;
}

MonteCarloEstimate finish_mean(const MomentStats& st, std::uint64_t seed) {
  MonteCarloEstimate est;
  const double N = static_cast<double>(st.count);
  est.n_samples = st.count;
  est.seed = seed;
  est.value = st.sum / N;
  const double var = std::max(0.0, (st.sum_sq - st.sum * est.value) / (N - 1.0));
  est.std_error = std::sqrt(var / N);
  est.ci_low = est.value - kZ95 * est.std_error;
  est.ci_high = est.value + kZ95 * est.std_error;
  est.effective_sample_size = N;
  return est;
}

// Wilson score interval; keeps a nonzero upper limit when no event was seen.
MonteCarloEstimate finish_proportion(const MomentStats& st, std::uint64_t seed) {
  MonteCarloEstimate est;
  const double N = static_cast<double>(st.count);
  const double phat = static_cast<double>(st.hits) / N;
  est.n_samples = st.count;
  est.seed = seed;
  est.value = phat;
  est.std_error = std::sqrt(phat * (1.0 - phat) / N);
  const double z2 = kZ95 * kZ95;
  const double centre = (phat + z2 / (2.0 * N)) / (1.0 + z2 / N);
  const double half =
      kZ95 * std::sqrt(phat * (1.0 - phat) / N + z2 / (4.0 * N * N)) / (1.0 + z2 / N);
  est.ci_low = std::min(phat, std::max(0.0, centre - half));
  est.ci_high = std::max(phat, std::min(1.0, centre + half));
  est.effective_sample_size = N;
  est.unreliable = static_cast<double>(st.hits) < kReliableCount;
  return est;
}

}  // namespace

MonteCarloEstimate thinshell_probability_exact(double p, double R, int n, double t,
                                               std::uint64_t samples, std::uint64_t seed) {
  require_lp(p);
  require_dimension(n);
  require_samples(samples, 1000);
  if (!(t > 0.0)) throw DomainError("deviation t must be positive");
  const double L2 = lp_closed_forms(p, R).L2;
  const double dn = static_cast<double>(n);
  const MomentStats st = run_blocks<MomentStats>(
      samples, seed,
      [&](Rng& rng, std::uint64_t k, MomentStats& out) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (std::uint64_t i = 0; i < k; ++i) {
          sample_lp_uniform_exact(p, dn * R, rng, x);
          double sq = 0.0;
          for (double v : x) sq += v * v;
          ++out.count;
          if (std::fabs(sq / dn - L2) >= t) ++out.hits;
        }
      },
      merge_moments);
  return finish_proportion(st, seed);
}

MonteCarloEstimate mean_sq_norm_exact(double p, double R, int n, std::uint64_t samples,
                                      std::uint64_t seed) {
  require_lp(p);
  require_dimension(n);
  require_samples(samples, 2);
  const double dn = static_cast<double>(n);
  const MomentStats st = run_blocks<MomentStats>(
      samples, seed,
      [&](Rng& rng, std::uint64_t k, MomentStats& out) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (std::uint64_t i = 0; i < k; ++i) {
          sample_lp_uniform_exact(p, dn * R, rng, x);
          double sq = 0.0;
          for (double v : x) sq += v * v;
          ++out.count;
          out.sum += sq / dn;
          out.sum_sq += (sq / dn) * (sq / dn);
        }
      },
      merge_moments);
  return finish_mean(st, seed);
}

NormalizationCheck normalization_check(const OrliczFunction& f, double R, int n,
                                       std::uint64_t samples, std::uint64_t seed) {
  require_dimension(n);
  require_samples(samples, 2);
  const GibbsSummary s = gibbs_summary(f, R);
  const ShellSums proto(f, s, n);
  const double alpha = s.alpha_star;
  const MomentStats st = run_blocks<MomentStats>(
      samples, seed,
      [&](Rng& rng, std::uint64_t k, MomentStats& out) {
        ShellSums sums = proto;
        for (std::uint64_t i = 0; i < k; ++i) {
          const double w = importance_weight(alpha, sums.draw_s1_any(rng));
          ++out.count;
          if (w > 0.0) ++out.hits;
          out.sum += w;
          out.sum_sq += w * w;
        }
      },
      merge_moments);

  NormalizationCheck out;
  out.estimate = finish_mean(st, seed);
  out.estimate.effective_sample_size =
      st.sum_sq > 0.0 ? st.sum * st.sum / st.sum_sq : 0.0;
  out.estimate.unreliable = out.estimate.effective_sample_size < kReliableCount;
  out.theory = 1.0 / (std::fabs(alpha) *
                      std::sqrt(2.0 * std::numbers::pi * static_cast<double>(n) * s.phi2));
  out.ratio = out.estimate.value / out.theory;
  return out;
}

}  // namespace orlicz
