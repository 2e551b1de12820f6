#pragma once

#include <cstdint>

namespace nlroth {

// Counter-based generator: the value at (seed, stream, counter) is a fixed
// function of its arguments, so generated objects do not depend on traversal
// order or thread count. The mixer is SplitMix64's finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const { return mix64(key_ ^ mix64(counter)); }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  constexpr bool bernoulli(std::uint64_t counter, double p) const { return uniform(counter) < p; }

 private:
  std::uint64_t key_;
};

}  // namespace nlroth
