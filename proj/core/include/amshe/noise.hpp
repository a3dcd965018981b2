#pragma once

#include <span>
#include <vector>

#include "amshe/kernel.hpp"
#include "amshe/seeds.hpp"
#include "amshe/spectral.hpp"

namespace amshe {

/// Density of one noise increment over a time step dt.
struct NoiseSlice {
  std::vector<double> field;
  double dt = 0.0;
};

/// Fill `out` with iid N(0, sd^2) draws (ziggurat).
void fill_gaussian(Rng& rng, std::span<double> out, double sd);

/// Draws slices phi (*) w, w iid N(0, dt/dx^d) per cell, so that
/// Cov(slice(x), slice(x')) = dt R(x - x'). For mollified kernels w is drawn
/// through its transform. Owns its own FFT workspace.
class NoiseSampler {
 public:
  explicit NoiseSampler(const DiscreteKernel& kernel);

  const DiscreteKernel& kernel() const noexcept { return *kernel_; }

  void sample_into(Rng& rng, double dt, std::span<double> out);

 private:
  const DiscreteKernel* kernel_;
  SpectralGrid grid_;
};

NoiseSlice sample_noise_increment(Rng& rng, const DiscreteKernel& kernel, const DomainSpec& domain, double dt);

}  // namespace amshe
