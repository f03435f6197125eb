#pragma once

#include <cstdint>
#include <random>

namespace lnss {

using Rng = std::mt19937_64;

// splitmix64 finalizer; spreads nearby seeds into decorrelated values.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derives an independent stream from (seed, stream tag). Sequential seeds
// (mother-seed scheme) and sequential tags both land far apart.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng{splitmix64(splitmix64(seed) + stream)};
}

// Stream tags used by the training harness. The evaluation environment is
// seeded with its own seed, so an evaluation pass never advances any
// training stream.
namespace rng_stream {
inline constexpr std::uint64_t kEnv = 1;
inline constexpr std::uint64_t kExplore = 2;
inline constexpr std::uint64_t kNetInit = 3;
inline constexpr std::uint64_t kLearner = 4;
}  // namespace rng_stream

}  // namespace lnss
