#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace crowdwise {

// Counter-based splittable generator (SplitMix64). The state advances by a
// fixed odd increment and the output is a bijective mix of the counter, so
// distinct seeds give independent streams and runs can be farmed out in
// parallel without coordination.
//
// Stream consumption contract (per-build reproducibility relies on it):
//   - next_u64 / next_below / next_unit consume exactly one counter step
//   - next_gaussian consumes exactly two counter steps (Box-Muller pair)
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64() {
    std::uint64_t x = (state_ += 0x9e3779b97f4a7c15ull);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  // Uniform on {0, 1, ..., n-1} via multiply-shift; bias is O(n / 2^64).
  int next_below(int n) {
    return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                             static_cast<unsigned __int128>(n)) >>
                            64);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal deviate, Box-Muller. u1 is drawn from (0, 1] so the
  // logarithm is always finite.
  double next_gaussian() {
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Independent child stream; advances this stream by one step.
  SplitMix64 split() { return SplitMix64(next_u64() ^ 0x5851f42d4c957f2dull); }

 private:
  std::uint64_t state_;
};

}  // namespace crowdwise
