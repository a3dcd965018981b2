#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "amshe/domain.hpp"
#include "amshe/kernel.hpp"
#include "amshe/solver.hpp"

namespace amshe {

/// A stored realization of dU on [t0, t0 + dt * slices.size()).
/// Slice k holds the increment over [t0 + k dt, t0 + (k + 1) dt).
struct FrozenNoise {
  DomainSpec domain;
  KernelSpec kernel;
  double dt = 0.0;
  double t0 = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> slices;

  double t_end() const noexcept { return t0 + dt * static_cast<double>(slices.size()); }
  /// Index of the slice starting at t; fails off the time grid or outside the record.
  std::size_t index_of(double t) const;
};

FrozenNoise generate_frozen_noise(const DiscreteKernel& kernel, double dt, double t0, std::size_t steps,
                                  std::uint64_t seed);

/// Binary record: magic, format version, header fields, then slices as
/// host-order doubles. Writes go through a temporary file and a rename.
void save_frozen_noise(const FrozenNoise& noise, const std::filesystem::path& path);
FrozenNoise load_frozen_noise(const std::filesystem::path& path);

/// Feed that replays slices first_step, first_step + 1, ... translated by `shift` cells.
/// It supplies dU only.
NoiseFeed frozen_feed(const FrozenNoise& noise, std::size_t first_step, std::array<long, 3> shift = {0, 0, 0});

/// Steps a propagator field from time s to t against the frozen slices.
void propagate(FieldState& Z, double s, double t, const SchemeParams& params, Stepper& stepper,
               const FrozenNoise& noise);

/// Z_{s,t}(y, .): the scheme run from the discrete delta 1/dx^d at y.
FieldState propagator_run(double s, double t, const Point& y, const SchemeParams& params, const DiscreteKernel& kernel,
                          const FrozenNoise& noise);

}  // namespace amshe
