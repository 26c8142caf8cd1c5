#pragma once

#include <cstdint>
#include <random>

namespace aoitail {

// splitmix64 finalizer. Used to whiten seeds and derive substreams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent substream seed for (master, stream, purpose). Every random
// consumer in the simulator owns one such stream, so per-sensor results do
// not depend on how many other sensors run or on scheduling order.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t purpose) {
  return mix64(mix64(mix64(master) ^ stream) ^ purpose);
}

// purpose tags (arbitrary fixed constants)
inline constexpr std::uint64_t kStreamTrafficOnline = 0x6f6e2d7472616631ull;
inline constexpr std::uint64_t kStreamTrafficTrain = 0x74722d7472616632ull;
inline constexpr std::uint64_t kStreamFading = 0x666164652d726e67ull;
inline constexpr std::uint64_t kStreamSelection = 0x73656c2d72657374ull;
inline constexpr std::uint64_t kStreamRound = 0x666c2d726f756e64ull;

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(mix64(seed));
}

}  // namespace aoitail
