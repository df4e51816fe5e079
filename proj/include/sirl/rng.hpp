#pragma once

#include <cstdint>

namespace sirl {

// Counter-free splitmix64 generator. Streams are derived by hashing a key
// tuple, so per-(agent, step) draws are independent of evaluation order.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n). n must be > 0.
  uint32_t next_below(uint32_t n) {
    return static_cast<uint32_t>(next_u64() % n);
  }

  // Uniform in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  uint64_t state_;
};

inline uint64_t hash_mix(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t a, uint64_t b) {
  return hash_mix(a + 0x9e3779b97f4a7c15ull + (b << 6) + (b >> 2));
}

// Derives a child stream from a seed and up to four tag values.
inline Rng derive_rng(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0,
                      uint64_t d = 0) {
  uint64_t h = hash_combine(seed, a);
  h = hash_combine(h, b);
  h = hash_combine(h, c);
  h = hash_combine(h, d);
  return Rng(h);
}

}  // namespace sirl
