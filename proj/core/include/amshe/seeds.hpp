#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace amshe {

using Rng = std::mt19937_64;

enum class StreamTag : std::uint8_t { U = 0, V = 1, Bridge = 2, NullCalibration = 3 };

std::string_view stream_tag_name(StreamTag tag);

struct SeedDerivation {
  std::uint64_t base_seed = 0;
  std::uint64_t path_index = 0;
  StreamTag stream_tag = StreamTag::U;
};

/// Path indices below this bound map injectively to seeds for every tag.
inline constexpr std::uint64_t kMaxPathIndex = std::uint64_t{1} << 48;

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z) noexcept;

std::uint64_t derive_seed(const SeedDerivation& d);

inline Rng make_rng(std::uint64_t base_seed, std::uint64_t path_index, StreamTag tag) {
  return Rng(derive_seed({base_seed, path_index, tag}));
}

/// Disjoint path-index ranges for independent families of runs within one experiment.
inline constexpr std::uint64_t family_path_index(std::uint64_t family, std::uint64_t index) noexcept {
  return (family << 40) + index;
}

}  // namespace amshe
