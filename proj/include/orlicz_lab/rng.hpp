#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace orlicz {

/// Engine behind every Monte Carlo stream.
using Rng = std::mt19937_64;

/// SplitMix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of block b of the stream `seed`: splitmix64(splitmix64(seed) ^ b).
constexpr std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
  return splitmix64(splitmix64(seed) ^ block);
}

/// Uniform on the open interval (0, 1): 53 random bits, offset by half an ulp.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

/// Samples per block; fixed so results never depend on the worker count.
inline constexpr std::uint64_t kBlockSize = 1u << 16;

/// Worker count: hardware concurrency, capped by ORLICZ_LAB_THREADS.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ORLICZ_LAB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

/// Runs `fill(rng, count, stats)` for every block of `total` samples and
/// merges the per-block statistics in block order with `merge(acc, block)`.
/// Block b draws from Rng(block_seed(seed, b)).
template <class Stats, class Fill, class Merge>
Stats run_blocks(std::uint64_t total, std::uint64_t seed, Fill fill, Merge merge) {
  const std::uint64_t blocks = (total + kBlockSize - 1) / kBlockSize;
  std::vector<Stats> parts(blocks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;

  auto work = [&] {
    while (true) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        Rng rng(block_seed(seed, b));
        const std::uint64_t count = std::min(kBlockSize, total - b * kBlockSize);
        fill(rng, count, parts[b]);
      } catch (...) {
        std::lock_guard<std::mutex> guard(failure_lock);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
      }
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(blocks, 1)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  Stats acc{};
  for (const auto& part : parts) merge(acc, part);
  return acc;
}

}  // namespace orlicz
