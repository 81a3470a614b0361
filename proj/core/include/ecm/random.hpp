#pragma once

#include <cstdint>
#include <random>

namespace ecm {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent per-run streams.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for run `run` of cell `cell` under `master`. Independent of worker
/// count and scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell,
                                    std::uint64_t run) noexcept {
  return mix64(mix64(mix64(master) ^ cell) ^ (run * 0xd1b54a32d192ed03ULL));
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Uniform integer in [0, n). Requires n > 0.
template <typename Int>
Int uniform_index(Rng& rng, Int n) {
  return std::uniform_int_distribution<Int>(0, n - 1)(rng);
}

}  // namespace ecm
