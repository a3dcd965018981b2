#include "amshe/frozen_noise.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "amshe/errors.hpp"
#include "amshe/noise.hpp"
#include "amshe/seeds.hpp"

namespace amshe {

namespace {

constexpr char kMagic[8] = {'A', 'M', 'S', 'H', 'E', 'F', 'N', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) fail(ErrorCode::Io, "truncated frozen-noise record");
  return v;
}

}  // namespace

std::size_t FrozenNoise::index_of(double t) const {
  const double r = (t - t0) / dt;
  const double k = std::round(r);
  if (std::abs(r - k) > 1e-9 * std::max(1.0, std::abs(r))) {
    fail(ErrorCode::InvalidArgument, "time " + std::to_string(t) + " is not on the frozen-noise grid");
  }
  if (k < 0.0 || k > static_cast<double>(slices.size())) {
    fail(ErrorCode::InvalidArgument, "time " + std::to_string(t) + " lies outside the frozen-noise record");
  }
  return static_cast<std::size_t>(k);
}

FrozenNoise generate_frozen_noise(const DiscreteKernel& kernel, double dt, double t0, std::size_t steps,
                                  std::uint64_t seed) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "dt must be positive");
  FrozenNoise noise{kernel.domain, kernel.spec, dt, t0, seed, {}};
  NoiseSampler sampler(kernel);
  Rng rng = make_rng(seed, 0, StreamTag::U);
  noise.slices.assign(steps, std::vector<double>(kernel.domain.cell_count()));
  for (auto& slice : noise.slices) sampler.sample_into(rng, dt, slice);
  return noise;
}

void save_frozen_noise(const FrozenNoise& noise, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    out.write(kMagic, sizeof kMagic);
    put(out, kFormatVersion);
    put(out, static_cast<std::uint8_t>(noise.domain.geometry()));
    put(out, static_cast<std::uint8_t>(noise.domain.dimension()));
    put(out, static_cast<std::uint64_t>(noise.domain.points_per_axis()));
    put(out, noise.domain.side_length());
    put(out, static_cast<std::uint8_t>(noise.kernel.kind));
    put(out, static_cast<std::uint8_t>(noise.kernel.shape));
    put(out, noise.kernel.half_width);
    put(out, noise.kernel.epsilon.value_or(0.0));
    put(out, noise.dt);
    put(out, noise.t0);
    put(out, noise.seed);
    put(out, static_cast<std::uint64_t>(noise.slices.size()));
    put(out, static_cast<std::uint64_t>(noise.domain.cell_count()));
    for (const auto& s : noise.slices) {
      if (s.size() != noise.domain.cell_count()) fail(ErrorCode::InvalidArgument, "slice size mismatch");
      out.write(reinterpret_cast<const char*>(s.data()), static_cast<std::streamsize>(s.size() * sizeof(double)));
    }
    if (!out) fail(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::Io, "cannot rename " + tmp.string() + ": " + ec.message());
}

FrozenNoise load_frozen_noise(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) fail(ErrorCode::Io, path.string() + " is not a frozen-noise record");
  const auto version = get<std::uint32_t>(in);
  if (version != kFormatVersion) {
    fail(ErrorCode::SchemaVersion, "frozen-noise format version " + std::to_string(version) + " is not supported");
  }
  const auto geometry = static_cast<Geometry>(get<std::uint8_t>(in));
  const int dim = get<std::uint8_t>(in);
  const auto points = get<std::uint64_t>(in);
  const auto side = get<double>(in);
  DomainSpec domain(geometry, dim, side, points);
  KernelSpec kernel;
  kernel.kind = static_cast<KernelKind>(get<std::uint8_t>(in));
  kernel.shape = static_cast<KernelShape>(get<std::uint8_t>(in));
  kernel.half_width = get<double>(in);
  if (const double eps = get<double>(in); eps != 0.0) kernel.epsilon = eps;
  FrozenNoise noise{domain, kernel, 0.0, 0.0, 0, {}};
  noise.dt = get<double>(in);
  noise.t0 = get<double>(in);
  noise.seed = get<std::uint64_t>(in);
  const auto steps = get<std::uint64_t>(in);
  const auto cells = get<std::uint64_t>(in);
  if (cells != domain.cell_count()) fail(ErrorCode::Io, "cell count in header does not match the domain");
  noise.slices.assign(steps, std::vector<double>(cells));
  for (auto& s : noise.slices) {
    in.read(reinterpret_cast<char*>(s.data()), static_cast<std::streamsize>(cells * sizeof(double)));
    if (!in) fail(ErrorCode::Io, "truncated frozen-noise record");
  }
  return noise;
}

NoiseFeed frozen_feed(const FrozenNoise& noise, std::size_t first_step, std::array<long, 3> shift) {
  const bool shifted = shift != std::array<long, 3>{0, 0, 0};
  return [&noise, first_step, shift, shifted](std::size_t step, std::span<double> dU, std::span<double> dV) {
    if (!dV.empty()) fail(ErrorCode::InvalidArgument, "frozen noise carries dU only");
    const std::size_t k = first_step + step;
    if (k >= noise.slices.size()) fail(ErrorCode::InvalidArgument, "frozen noise exhausted");
    const auto& slice = noise.slices[k];
    if (!shifted) {
      std::copy(slice.begin(), slice.end(), dU.begin());
      return;
    }
    for (std::size_t i = 0; i < slice.size(); ++i) dU[noise.domain.translate(i, shift)] = slice[i];
  };
}

void propagate(FieldState& Z, double s, double t, const SchemeParams& params, Stepper& stepper,
               const FrozenNoise& noise) {
  if (!(s <= t)) fail(ErrorCode::InvalidArgument, "propagation needs s <= t");
  if (std::abs(params.dt - noise.dt) > 1e-15 * noise.dt) fail(ErrorCode::InvalidArgument, "dt differs from the frozen noise");
  const std::size_t first = noise.index_of(s);
  const std::size_t last = noise.index_of(t);
  for (std::size_t k = first; k < last; ++k) stepper.mshe(Z, noise.slices[k], params);
  Z.t = t;
}

FieldState propagator_run(double s, double t, const Point& y, const SchemeParams& params, const DiscreteKernel& kernel,
                          const FrozenNoise& noise) {
  if (!(s < t)) fail(ErrorCode::InvalidArgument, "propagator needs s < t");
  if (!(kernel.domain == noise.domain)) fail(ErrorCode::InvalidArgument, "frozen noise was drawn on a different domain");
  validate_scheme(params, kernel);
  FieldState Z{std::vector<double>(kernel.domain.cell_count(), 0.0), s, FieldRole::PropagatorZ};
  Z.values[kernel.domain.snap(y)] = 1.0 / kernel.domain.cell_volume();
  Stepper stepper(kernel.domain);
  propagate(Z, s, t, params, stepper, noise);
  return Z;
}

}  // namespace amshe
