#include "amshe/noise.hpp"

#include <boost/random/normal_distribution.hpp>
#include <cmath>

#include "amshe/errors.hpp"

namespace amshe {

void fill_gaussian(Rng& rng, std::span<double> out, double sd) {
  boost::random::normal_distribution<double> normal(0.0, sd);
  for (double& v : out) v = normal(rng);
}

NoiseSampler::NoiseSampler(const DiscreteKernel& kernel) : kernel_(&kernel), grid_(kernel.domain) {}

void NoiseSampler::sample_into(Rng& rng, double dt, std::span<double> out) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "dt must be positive");
  const auto& domain = kernel_->domain;
  if (out.size() != domain.cell_count()) fail(ErrorCode::InvalidArgument, "noise buffer size mismatch");
  const double sd = std::sqrt(dt / domain.cell_volume());
  if (kernel_->is_white()) {
    fill_gaussian(rng, out, sd);
    return;
  }
  // Draw the transform of the white field directly: independent complex
  // Gaussians of variance N^d sd^2, real on self-conjugate modes, conjugate
  // pairs on the self-conjugate columns.
  auto spec = grid_.spectrum();
  const auto& partner = grid_.conjugate_partner();
  const double total_sd = sd * std::sqrt(static_cast<double>(domain.cell_count()));
  boost::random::normal_distribution<double> half(0.0, total_sd * std::sqrt(0.5));
  boost::random::normal_distribution<double> full(0.0, total_sd);
  for (std::size_t s = 0; s < spec.size(); ++s) {
    const auto p = partner[s];
    if (p == SpectralGrid::kNoPartner || p > s) {
      const double re = half(rng);
      spec[s] = Complex(re, half(rng));
      if (p != SpectralGrid::kNoPartner) spec[p] = std::conj(spec[s]);
    } else if (p == s) {
      spec[s] = Complex(full(rng), 0.0);
    }
  }
  for (std::size_t s = 0; s < spec.size(); ++s) spec[s] *= kernel_->noise_multiplier[s];
  grid_.backward();
  std::copy(grid_.real().begin(), grid_.real().end(), out.begin());
}

NoiseSlice sample_noise_increment(Rng& rng, const DiscreteKernel& kernel, const DomainSpec& domain, double dt) {
  if (!(kernel.domain == domain)) fail(ErrorCode::InvalidArgument, "kernel was built for a different domain");
  NoiseSampler sampler(kernel);
  NoiseSlice slice{std::vector<double>(domain.cell_count()), dt};
  sampler.sample_into(rng, dt, slice.field);
  return slice;
}

}  // namespace amshe
