#pragma once

#include <cstdint>

namespace prefsense {

/// Counter-based 64-bit generator: the n-th output is the SplitMix64
/// finalizer applied to key + n * golden_gamma. Any (key, counter) pair can
/// be evaluated directly, so sub-streams for parallel chunks are exact
/// slices of a single reproducible sequence.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x6a09e667f3bcc909ULL))) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t at(std::uint64_t counter) const {
    return mix(key_ + (counter + 1) * kGamma);
  }

  constexpr std::uint64_t next() { return at(counter_++); }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n) for 0 < n <= 2^53 (one draw, floor(u * n)).
  constexpr std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  }

  constexpr void seek(std::uint64_t counter) { counter_ = counter; }
  constexpr std::uint64_t position() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace prefsense
