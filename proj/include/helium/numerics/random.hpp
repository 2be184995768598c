#pragma once

#include <cstdint>

namespace helium::numerics {

/// SplitMix64 finalizer. Used as a counter-based generator: the value for
/// (key, counter) never depends on how many values were drawn before.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t counter_hash(std::uint64_t key, std::uint64_t stream, std::uint64_t counter) {
  return mix64(mix64(mix64(key) ^ (stream * 0xd1b54a32d192ed03ULL)) ^ counter);
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace helium::numerics
