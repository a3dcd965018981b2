#include "amshe/halfplane.hpp"

#include <algorithm>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <cmath>
#include <string>

#include "amshe/errors.hpp"

namespace amshe {

double brownian_halfplane_oracle(double a, Rng& rng, const HalfplaneOptions& options) {
  if (!(a >= 0.0) || !std::isfinite(a)) fail(ErrorCode::InvalidArgument, "start depth must be finite and >= 0");
  if (!(options.dt > 0.0)) fail(ErrorCode::InvalidArgument, "dt must be positive");
  if (a == 0.0) return 0.0;

  boost::random::normal_distribution<double> normal;
  boost::random::uniform_01<double> unif;
  double x = a;
  double y = 0.0;
  for (std::uint64_t step = 0; step < options.max_steps; ++step) {
    const double r = x / options.depth_ratio;
    const double h = std::max(options.dt, r * r);
    const double sd = std::sqrt(h);
    const double x1 = x + sd * normal(rng);
    double frac = -1.0;
    if (x1 <= 0.0) {
      frac = x / (x - x1);
    } else if (unif(rng) < std::exp(-2.0 * x * x1 / h)) {
      // The bridge dipped below zero between two positive endpoints; place the
      // crossing closer to the lower endpoint.
      frac = x / (x + x1);
    }
    if (frac >= 0.0) return y + std::sqrt(frac * h) * normal(rng);
    y += sd * normal(rng);
    x = x1;
  }
  fail(ErrorCode::RunawayPath, "half-plane walker did not exit within " + std::to_string(options.max_steps) + " steps");
}

}  // namespace amshe
