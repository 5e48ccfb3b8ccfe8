#pragma once

#include <cstdint>

namespace sf {

// splitmix64: tiny deterministic generator, stable across platforms (unlike
// std:: distributions), used wherever outputs land in committed artifacts.
inline uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline uint64_t hash_u64(uint64_t x) {
  uint64_t s = x;
  return splitmix64_next(s);
}

struct SplitMix {
  uint64_t state;

  explicit SplitMix(uint64_t seed) : state(seed) {}

  uint64_t next() { return splitmix64_next(state); }
  double unit() { return (next() >> 11) * 0x1.0p-53; }  // [0, 1)
  double range(double a, double b) { return a + (b - a) * unit(); }
  int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
};

}  // namespace sf
