#pragma once

// Counter-based sampling: every draw is a pure function of
// (seed, suite, index, slot), so results do not depend on scheduling.

#include <cstdint>
#include <string_view>

namespace dalorenz::lab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view suite, std::uint64_t index)
      : key_(splitmix64(splitmix64(seed ^ fnv1a(suite)) ^ index)) {}

  /// Uniform double in [0, 1) for draw number `slot`.
  double uniform(std::uint64_t slot) const {
    return static_cast<double>(splitmix64(key_ ^ splitmix64(slot)) >> 11) * 0x1.0p-53;
  }
  double uniform(std::uint64_t slot, double lo, double hi) const { return lo + (hi - lo) * uniform(slot); }

 private:
  std::uint64_t key_;
};

}  // namespace dalorenz::lab
