#include "amshe/seeds.hpp"

#include "amshe/errors.hpp"

namespace amshe {

std::string_view stream_tag_name(StreamTag tag) {
  switch (tag) {
    case StreamTag::U: return "U";
    case StreamTag::V: return "V";
    case StreamTag::Bridge: return "bridge";
    case StreamTag::NullCalibration: return "null-calibration";
  }
  return "?";
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// key = path_index * 256 + tag is injective for path_index < 2^56, and
// key -> mix64(mix64(key) + mix64(base)) is a composition of bijections.
std::uint64_t derive_seed(const SeedDerivation& d) {
  if (d.path_index >= kMaxPathIndex) fail(ErrorCode::InvalidArgument, "path index exceeds 2^48");
  const std::uint64_t key = (d.path_index << 8) | static_cast<std::uint64_t>(d.stream_tag);
  return mix64(mix64(key) + mix64(d.base_seed ^ 0x9e3779b97f4a7c15ULL));
}

}  // namespace amshe
