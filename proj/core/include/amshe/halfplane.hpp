#pragma once

#include <cstdint>

#include "amshe/seeds.hpp"

namespace amshe {

struct HalfplaneOptions {
  /// Finest step; used once the walker is within a few sqrt(dt) of the boundary.
  double dt = 1e-4;
  /// Far from the boundary the step is (x / depth_ratio)^2, so the per-step
  /// crossing probability stays below exp(-2 depth_ratio^2).
  double depth_ratio = 4.0;
  std::uint64_t max_steps = 50'000'000;
};

/// Ordinate at which planar Brownian motion from (a, 0) first reaches {x = 0}.
///
/// Steps are exact Gaussian increments. A step that stays in x > 0 still counts
/// as a crossing with the Brownian-bridge probability exp(-2 x0 x1 / h). The
/// crossing time inside a step is placed at the linear zero of x. Throws
/// RunawayPath after max_steps.
double brownian_halfplane_oracle(double a, Rng& rng, const HalfplaneOptions& options = {});

}  // namespace amshe
