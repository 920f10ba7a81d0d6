#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace ssc {

/// splitmix64 finalizer; the mixing step of every counter-based draw below.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a, used to turn labels into stream keys.
constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Stateless counter-based generator. A stream is identified by a key
/// (seed, stream id, substream id); draw i of a stream is a pure function of
/// (key, i), so substreams never shift each other when one is skipped.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0,
                       std::uint64_t substream = 0)
      : key_(mix64(mix64(mix64(seed) ^ stream) ^ (substream * 0xd1b54a32d192ed03ULL))) {}

  [[nodiscard]] constexpr std::uint64_t bits(std::uint64_t counter) const {
    return mix64(key_ ^ mix64(counter));
  }

  /// Uniform in the open interval (0, 1).
  [[nodiscard]] double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on draws (2i, 2i+1).
  [[nodiscard]] double normal(std::uint64_t i) const {
    const double u1 = uniform(2 * i);
    const double u2 = uniform(2 * i + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
};

/// Stream ids keep unrelated consumers of the same seed apart.
namespace streams {
inline constexpr std::uint64_t kInitNoise = 1;
inline constexpr std::uint64_t kStyleSeeds = 2;
inline constexpr std::uint64_t kDecoder = 3;
inline constexpr std::uint64_t kPalette = 4;
inline constexpr std::uint64_t kLayout = 5;
inline constexpr std::uint64_t kField = 6;
}  // namespace streams

}  // namespace ssc
