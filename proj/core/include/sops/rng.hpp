#pragma once

// Random streams.  Every stream is a std::mt19937_64 seeded through
// std::seed_seq from a list of 64-bit keys, so a trial's stream depends only
// on (master seed, genome key, size index, trial index) and never on thread
// scheduling.  Bounded draws use Lemire's multiply-shift with rejection,
// which is exactly uniform and independent of the standard library's
// distribution implementations.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace sops {

using Rng = std::mt19937_64;

inline Rng make_rng(std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.reserve(keys.size() * 2);
  for (std::uint64_t k : keys) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

/// A 64-bit key derived from a list of keys (used to name evaluation streams).
inline std::uint64_t derive_key(std::initializer_list<std::uint64_t> keys) {
  Rng rng = make_rng(keys);
  return rng();
}

__extension__ using uint128 = unsigned __int128;

/// Uniform integer in [0, bound); bound must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  uint128 m = static_cast<uint128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<uint128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

}  // namespace sops
