#pragma once

#include <cstdint>

namespace tul {

/// splitmix64: used both as a stream mixer and as the PRNG core so that
/// every random draw in the toolkit is reproducible from integer seeds,
/// independent of the platform's <random> distributions.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t next_below(std::uint64_t n) {
    // Debiased modulo: retry while in the wrap-around zone.
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform float in [lo, hi).
  float next_float(float lo, float hi) {
    return lo + static_cast<float>(next_double()) * (hi - lo);
  }
};

/// Combines integer values into one seed; order-sensitive.
inline std::uint64_t mix_seed(std::uint64_t a) {
  Rng r(a);
  return r.next_u64();
}
template <typename... Rest>
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, Rest... rest) {
  Rng r(a ^ 0x517cc1b727220a95ull);
  std::uint64_t h = r.next_u64() ^ b;
  if constexpr (sizeof...(rest) == 0) {
    return mix_seed(h);
  } else {
    return mix_seed(h, rest...);
  }
}

} // namespace tul
