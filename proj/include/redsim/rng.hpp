#pragma once

#include <cstdint>

namespace redsim {

// Fixed 64-bit generator used everywhere results must be replayable.
// The algorithm identifier below is echoed into report metadata so a
// report documents how its traces were drawn.
inline constexpr const char* kRngAlgorithm = "splitmix64";

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). Multiply-shift; bias is below 2^-64 and identical
  // on every platform, which matters more here than perfect uniformity.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Derives an independent stream; deterministic in (seed, tag).
  SplitMix64 split(std::uint64_t tag) const {
    return SplitMix64(mix64(state_ ^ mix64(tag)));
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace redsim
