// rng.hpp - seeded randomness: substream derivation and gaussian draws.
//
// Every stochastic routine in the library takes either a seed or an engine
// reference. Reports that embed randomness record the seed they were given,
// so a run can be replayed byte-for-byte.
#pragma once

#include <cstdint>
#include <random>

namespace gaplab {

// splitmix64 finalizer; decorrelates nearby seeds/tags
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// independent substream seed for component `tag` of a master-seeded run
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  return mix64(master ^ mix64(tag + 0x517cc1b727220a95ull));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

// fresh distribution per call: normal_distribution caches a second variate,
// and we do not want that state to leak between call sites
inline double gaussian(std::mt19937_64& g) {
  return std::normal_distribution<double>(0.0, 1.0)(g);
}

inline double uniform01(std::mt19937_64& g) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(g);
}

inline std::uint64_t uniform_index(std::mt19937_64& g, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(g);
}

}  // namespace gaplab
