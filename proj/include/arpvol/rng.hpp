// Deterministic stream splitting: every consumer of randomness owns a
// dedicated generator whose seed is derived from (master seed, purpose,
// index), so adding or removing one consumer never shifts another's draws.
#pragma once

#include <cstdint>
#include <random>

namespace arpvol {

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose,
                                 std::uint64_t index = 0) {
  return mix64(mix64(master ^ mix64(purpose)) ^ mix64(index));
}

inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t purpose,
                                   std::uint64_t index = 0) {
  return std::mt19937_64(derive_seed(master, purpose, index));
}

// Purpose tags for the simulator's independent streams.
namespace purpose {
inline constexpr std::uint64_t obs_times = 0x01;
inline constexpr std::uint64_t obs_keep = 0x02;     // per asset
inline constexpr std::uint64_t obs_w = 0x03;
inline constexpr std::uint64_t df = 0x04;
inline constexpr std::uint64_t price_bm = 0x05;     // per asset
inline constexpr std::uint64_t factor_bm = 0x06;
inline constexpr std::uint64_t kappa_bm = 0x07;
inline constexpr std::uint64_t vol = 0x08;          // per asset
inline constexpr std::uint64_t vol_scale = 0x09;    // per asset
inline constexpr std::uint64_t factor_vol = 0x0a;   // per factor
inline constexpr std::uint64_t factor_scale = 0x0b; // per factor
inline constexpr std::uint64_t loadings = 0x0c;
inline constexpr std::uint64_t jumps = 0x0d;        // per asset
inline constexpr std::uint64_t noise = 0x0e;        // per asset
inline constexpr std::uint64_t replication = 0x0f;  // per experiment rep
}  // namespace purpose

}  // namespace arpvol
