#ifndef ROUGHIR_RANDOM_HPP
#define ROUGHIR_RANDOM_HPP

#include <cstdint>
#include <random>

namespace roughir {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed derivation: every random stream is identified by
/// (root seed, component id, replication index), independent of scheduling.
inline constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t component,
                                           std::uint64_t index) noexcept {
  return splitmix64(splitmix64(splitmix64(root) ^ component) ^ index);
}

inline Rng make_rng(std::uint64_t root, std::uint64_t component = 0, std::uint64_t index = 0) {
  return Rng(derive_seed(root, component, index));
}

/// Component ids used for seed derivation.
namespace stream {
inline constexpr std::uint64_t kPath = 0x01;
inline constexpr std::uint64_t kGaussianTable = 0x10;
inline constexpr std::uint64_t kStableTable = 0x11;
inline constexpr std::uint64_t kExperiment = 0x20;
inline constexpr std::uint64_t kTrendPair = 0x21;
inline constexpr std::uint64_t kSmallJumps = 0x30;
inline constexpr std::uint64_t kBigJumps = 0x31;
inline constexpr std::uint64_t kBrownianPart = 0x32;
}  // namespace stream

}  // namespace roughir

#endif  // ROUGHIR_RANDOM_HPP
