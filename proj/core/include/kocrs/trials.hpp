#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace kocrs {

/// Seed for trial `t` of a run with master seed `seed` (splitmix64 finalizer).
/// Depends only on (seed, t), so splitting trials across threads cannot change
/// any sample path.
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t t) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (t + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial) : engine_(trial_seed(seed, trial)) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::size_t kTrialChunk = 4096;

/// Runs `body(first, last, acc)` over fixed chunks of [0, trials) and merges
/// the per-chunk accumulators in chunk order. Chunk boundaries do not depend
/// on the thread count, so floating-point sums are reproducible.
template <class Acc, class Body, class Merge>
Acc run_chunked(std::size_t trials, Acc init, Body body, Merge merge,
                unsigned threads = 0) {
  const std::size_t chunks = (trials + kTrialChunk - 1) / kTrialChunk;
  std::vector<Acc> partial(chunks, init);
  auto work = [&](std::size_t c) {
    const std::size_t first = c * kTrialChunk;
    const std::size_t last = std::min(trials, first + kTrialChunk);
    body(first, last, partial[c]);
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) work(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += threads) work(c);
      });
    }
    for (auto& th : pool) th.join();
  }
  Acc total = init;
  for (auto& p : partial) merge(total, p);
  return total;
}

}  // namespace kocrs
