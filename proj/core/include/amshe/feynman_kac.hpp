#pragma once

#include <cstddef>

#include "amshe/domain.hpp"
#include "amshe/frozen_noise.hpp"
#include "amshe/kernel.hpp"
#include "amshe/seeds.hpp"
#include "amshe/solver.hpp"

namespace amshe {

/// Continuum heat kernel G_t(z) = prod_a (2 pi t)^{-1/2} exp(-z_a^2 / 2t), periodized over the box.
double periodized_heat_kernel(const DomainSpec& domain, const Point& displacement, double t);

/// Brute-force estimate of Z_{s,t}(y, x):
///   G_{t-s}(x - y) * mean over bridges of exp(beta sum_k dU_k(B_k) - beta^2 R(0) (t - s) / 2),
/// where B is a Brownian bridge from y at time s to (an image of) x at time t, sampled
/// at the slice start times, and dU_k is read from the nearest cell.
double feynman_kac_oracle(double s, double t, const Point& y, const Point& x, const SchemeParams& params,
                          const DiscreteKernel& kernel, const FrozenNoise& noise, std::size_t n_bridges, Rng& rng);

}  // namespace amshe
