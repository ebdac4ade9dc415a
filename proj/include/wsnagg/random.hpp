#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace wsnagg {

// std::mt19937_64 output is fixed by the standard; the distributions are not,
// so every draw goes through these helpers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound), bound > 0, rejection sampled.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double unit();
  double uniform(double low, double high) { return low + (high - low) * unit(); }
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// `count` distinct indices from [0, n) by partial Fisher-Yates, in draw order.
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t count);

}  // namespace wsnagg
