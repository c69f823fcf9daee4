#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tpe {

// Counter-based pseudo-random stream.
//
// Output i of a stream is mix(key, i) where mix is the SplitMix64 finalizer,
// so the sequence depends only on (key, counter) and is bit-identical on
// every platform. Sub-streams are derived with split(index); two different
// indices give statistically independent streams, which is how parallel or
// per-sample work keeps its results independent of scheduling.
class RngStream {
 public:
  explicit constexpr RngStream(std::uint64_t seed) : seed_(seed), key_(mix(seed ^ kSeedSalt)) {}

  // The user-facing seed this stream (or its parent) was created from.
  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64() { return mix(key_ + kGolden * (++counter_)); }

  // Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      const unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
      if (static_cast<std::uint64_t>(m) >= threshold) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform double in (0, 1].
  double uniform01_open_low() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  bool fair_bit() { return (next_u64() >> 63) != 0; }

  // Standard normal via Box-Muller; one draw consumes two counters.
  double normal() {
    const double u1 = uniform01_open_low();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  RngStream split(std::uint64_t index) const {
    RngStream child(seed_);
    child.key_ = mix(key_ ^ mix(index + kSplitSalt));
    child.counter_ = 0;
    return child;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSeedSalt = 0x243f6a8885a308d3ULL;
  static constexpr std::uint64_t kSplitSalt = 0x13198a2e03707344ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace tpe
