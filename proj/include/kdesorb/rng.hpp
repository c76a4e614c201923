#pragma once
#include <cmath>
#include <cstdint>

// Counter-based deterministic randomness. Every draw in the simulator is a
// pure hash of (seed, stream, step, index, slot), so results do not depend on
// evaluation order or thread count. The mixer is the splitmix64 finalizer;
// each absorbed word passes through the full permutation, so distinct key
// tuples cannot collide by word shuffling.

namespace kdesorb::rng {

// Draw streams. Keeping them in one place guarantees no two uses of the
// generator share a key by accident.
enum class Stream : std::uint64_t {
  diffusion = 1,
  forward = 2,          // gap + acceptance draws of the forward pair walk
  backward = 3,
  shuffle = 4,          // resolution-order shuffle of forward hits
  site_constants = 5,   // per-site K-hat draws
  init_positions_a = 6,
  init_positions_site = 7,
  init_occupancy = 8,   // which sites start as adsorbed complexes
  pair_reference = 9,   // per-pair draws of the reference (direct) sweep
  encounter_constants = 10,  // per-encounter K-hat redraw mode
  sweep = 11,           // derivation of per-replicate seeds
};

inline constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t absorb(std::uint64_t h, std::uint64_t word) {
  return mix(h + golden + word);
}

// 64 random-looking bits for the key (seed, stream, step, index, slot).
inline constexpr std::uint64_t bits(std::uint64_t seed, Stream stream,
                                    std::uint64_t step, std::uint64_t index,
                                    std::uint64_t slot = 0) {
  std::uint64_t h = absorb(seed, static_cast<std::uint64_t>(stream));
  h = absorb(h, step);
  h = absorb(h, index);
  h = absorb(h, slot);
  return h;
}

// Uniform on the open interval (0,1): never 0, never 1. Reaction rules of the
// form "event iff P >= xi" then give no events at P=0 and certainty at P=1.
// The grid is 52-bit on purpose: with a 53-bit grid the topmost midpoint
// 1 - 2^-54 is not representable and rounds to exactly 1.0.
inline constexpr double uniform_open(std::uint64_t b) {
  return (static_cast<double>(b >> 12) + 0.5) * 0x1p-52;
}

// Uniform on [0,1): can be exactly 0, never 1. Used for inverse-CDF sampling
// where the lower endpoint is part of the support.
inline constexpr double uniform_halfopen(std::uint64_t b) {
  return static_cast<double>(b >> 11) * 0x1p-53;
}

// Unbiased-enough integer in [0,n) via 128-bit multiply (bias < 2^-64).
inline constexpr std::uint64_t uniform_index(std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(b) * n) >> 64);
}

// One standard normal from two bit draws (Box-Muller, cosine branch).
inline double standard_normal(std::uint64_t b1, std::uint64_t b2) {
  const double u1 = uniform_open(b1);
  const double u2 = uniform_halfopen(b2);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace kdesorb::rng
