#pragma once

// Seeded generators for property tests. Each case draws from its own stream
// so that failures reproduce from the printed case index.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gen {

class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double log_uniform(double lo, double hi);
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Sorted grid symmetric about 0 containing 0, `half` points per side.
  std::vector<double> symmetric_grid(int half, double span);

 private:
  std::mt19937_64 rng_;
};

inline double Source::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

inline std::vector<double> Source::symmetric_grid(int half, double span) {
  std::vector<double> pos;
  for (int i = 0; i < half; ++i) pos.push_back(uniform(0.0, span));
  std::vector<double> grid = {0.0};
  for (double x : pos) {
    grid.push_back(x);
    grid.push_back(-x);
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

}  // namespace gen
