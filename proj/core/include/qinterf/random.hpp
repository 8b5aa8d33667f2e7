#pragma once

#include <cstdint>
#include <random>

namespace qinterf {

using Rng = std::mt19937_64;

/// Independent random streams used by one run. Each stream gets its own seed
/// derived from the run seed so that changing how often one component draws
/// numbers never shifts another component's sequence.
enum class Stream : std::uint64_t {
  init = 1,
  env = 2,
  replay = 3,
  behavior = 4,
  evaluation = 5,
  reservoir = 6,
  sweep = 7,
};

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for `stream` of the run seeded with `seed`:
/// splitmix64(splitmix64(seed) ^ (stream * 0x9E3779B97F4A7C15)).
std::uint64_t derive_seed(std::uint64_t seed, Stream stream);

inline Rng make_rng(std::uint64_t seed, Stream stream) { return Rng(derive_seed(seed, stream)); }

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n). Uses rejection to avoid modulo bias.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

}  // namespace qinterf
