#include "amshe/feynman_kac.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "amshe/errors.hpp"

namespace amshe {

namespace {

double wrap_minimal(double z, double L) { return z - L * std::round(z / L); }

int image_range(double t, double L) { return static_cast<int>(std::ceil(10.0 * std::sqrt(t) / L)) + 1; }

double periodized_1d(double z, double t, double L) {
  const int M = image_range(t, L);
  double acc = 0.0;
  for (int m = -M; m <= M; ++m) {
    const double w = z + m * L;
    acc += std::exp(-w * w / (2.0 * t));
  }
  return acc / std::sqrt(2.0 * std::numbers::pi * t);
}

// Endpoint image z + mL with probability proportional to the Gaussian weight of each image.
double sample_image(double z, double t, double L, Rng& rng) {
  const int M = image_range(t, L);
  std::vector<double> w;
  double total = 0.0;
  for (int m = -M; m <= M; ++m) {
    const double d = z + m * L;
    w.push_back(std::exp(-d * d / (2.0 * t)));
    total += w.back();
  }
  double u = boost::random::uniform_01<double>()(rng) * total;
  for (int m = -M; m <= M; ++m) {
    u -= w[static_cast<std::size_t>(m + M)];
    if (u <= 0.0) return z + m * L;
  }
  return z + M * L;
}

}  // namespace

double periodized_heat_kernel(const DomainSpec& domain, const Point& displacement, double t) {
  if (!(t > 0.0)) fail(ErrorCode::InvalidArgument, "heat kernel time must be positive");
  double g = 1.0;
  for (int a = 0; a < domain.dimension(); ++a) {
    const double L = domain.side_length();
    g *= periodized_1d(wrap_minimal(displacement[static_cast<std::size_t>(a)], L), t, L);
  }
  return g;
}

double feynman_kac_oracle(double s, double t, const Point& y, const Point& x, const SchemeParams& params,
                          const DiscreteKernel& kernel, const FrozenNoise& noise, std::size_t n_bridges, Rng& rng) {
  if (kernel.is_white()) fail(ErrorCode::WhiteNoiseUnsupported, "the Feynman-Kac oracle needs a smooth kernel");
  if (!(s < t)) fail(ErrorCode::InvalidArgument, "oracle needs s < t");
  if (n_bridges == 0) fail(ErrorCode::InvalidArgument, "n_bridges must be positive");
  if (!(kernel.domain == noise.domain)) fail(ErrorCode::InvalidArgument, "frozen noise was drawn on a different domain");
  const auto& domain = kernel.domain;
  const std::size_t first = noise.index_of(s);
  const std::size_t n = noise.index_of(t) - first;
  const double tau = static_cast<double>(n) * noise.dt;
  const int d = domain.dimension();
  const double L = domain.side_length();

  Point disp{0.0, 0.0, 0.0};
  for (int a = 0; a < d; ++a) disp[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(a)] - y[static_cast<std::size_t>(a)];
  const double G = periodized_heat_kernel(domain, disp, tau);
  const double drift = -0.5 * params.beta * params.beta * kernel.R0 * tau;
  if (params.beta == 0.0) return G;

  boost::random::normal_distribution<double> normal;
  double acc = 0.0;
  for (std::size_t b = 0; b < n_bridges; ++b) {
    Point end{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) {
      end[static_cast<std::size_t>(a)] = sample_image(wrap_minimal(disp[static_cast<std::size_t>(a)], L), tau, L, rng);
    }
    Point pos{0.0, 0.0, 0.0};
    double exponent = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      Point here{0.0, 0.0, 0.0};
      for (int a = 0; a < d; ++a) here[static_cast<std::size_t>(a)] = y[static_cast<std::size_t>(a)] + pos[static_cast<std::size_t>(a)];
      exponent += noise.slices[first + k][domain.snap(here)];
      if (k + 1 == n) break;
      // Bridge transition from time k dt to (k + 1) dt, pinned at `end` at time tau.
      const double remaining = tau - static_cast<double>(k) * noise.dt;
      const double frac = noise.dt / remaining;
      const double sd = std::sqrt(noise.dt * (1.0 - frac));
      for (int a = 0; a < d; ++a) {
        auto& p = pos[static_cast<std::size_t>(a)];
        p += (end[static_cast<std::size_t>(a)] - p) * frac + sd * normal(rng);
      }
    }
    acc += std::exp(params.beta * exponent + drift);
  }
  return G * acc / static_cast<double>(n_bridges);
}

}  // namespace amshe
