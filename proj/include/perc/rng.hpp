#pragma once

// Counter-based uniforms: every random decision is a hash of
// (seed, stream, key), so results do not depend on visiting order or on how
// trials are split across threads.

#include <cstdint>
#include <stdexcept>

#include "perc/lattice.hpp"

namespace perc::rng {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t combine(std::uint64_t a, std::uint64_t b) { return mix64(a ^ mix64(b)); }

// Stream key for one (seed, stream) pair; hoist out of inner loops.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
  return combine(mix64(seed), stream);
}

// Uniform in [0, 1) with 53 random bits.
constexpr double uniform(std::uint64_t stream_key, std::uint64_t counter) {
  return static_cast<double>(mix64(stream_key ^ mix64(counter)) >> 11) * 0x1.0p-53;
}

// Position-independent key of the lattice edge {a, a + e_axis}: coordinates in
// [-2^14, 2^14) packed 15 bits each, axis in the top bits.
inline std::uint64_t lattice_edge_key(const Point& a, int axis) {
  std::uint64_t key = static_cast<std::uint64_t>(axis) << 60;
  for (int i = 0; i < a.d; ++i) {
    const int c = a[i] + (1 << 14);
    if (c < 0 || c >= (1 << 15)) throw std::out_of_range("coordinate too large for edge key");
    key |= static_cast<std::uint64_t>(c) << (15 * i);
  }
  return key;
}

// Domain tags separating independent families of decisions.
inline constexpr std::uint64_t kSprinkleTag = 0x5370726b6c65ull;
inline constexpr std::uint64_t kThinTag = 0x5468696e6e6eull;
inline constexpr std::uint64_t kForestTag = 0x466f72657374ull;
inline constexpr std::uint64_t kMultigraphTag = 0x4d756c7469ull;

}  // namespace perc::rng
