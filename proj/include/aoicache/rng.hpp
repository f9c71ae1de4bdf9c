#pragma once

#include <cstdint>
#include <random>

namespace aoicache {

// splitmix64 finalizer; derives independent stream seeds from (seed, tag) so
// that every consumer of randomness owns its own generator. Replays are
// identical as long as each stream's draw count stays schedule-fixed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng make_stream(std::uint64_t seed, std::uint64_t tag) {
  return Rng(mix_seed(seed, tag));
}

inline double draw_unit(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline int draw_int(Rng& rng, int lo, int hi) {  // inclusive bounds
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace aoicache
