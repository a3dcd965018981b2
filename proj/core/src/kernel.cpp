#include "amshe/kernel.hpp"

#include <cmath>
#include <string>

#include "amshe/errors.hpp"

namespace amshe {

std::string_view kernel_kind_name(KernelKind k) { return k == KernelKind::White ? "white" : "mollifier"; }
std::string_view kernel_shape_name(KernelShape s) { return s == KernelShape::Bump ? "bump" : "triangle"; }

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "white") return KernelKind::White;
  if (name == "mollifier") return KernelKind::Mollifier;
  fail(ErrorCode::InvalidArgument, "unknown kernel kind '" + std::string(name) + "'");
}

KernelShape parse_kernel_shape(std::string_view name) {
  if (name == "bump") return KernelShape::Bump;
  if (name == "triangle") return KernelShape::Triangle;
  fail(ErrorCode::InvalidArgument, "unknown kernel shape '" + std::string(name) + "'");
}

namespace {

double profile(KernelShape shape, double r) {
  if (r >= 1.0) return 0.0;
  if (shape == KernelShape::Triangle) return 1.0 - r;
  return std::exp(-1.0 / (1.0 - r * r));
}

// Distance of a cell from the wrap origin (cell 0) using the minimal image.
double wrapped_radius(const DomainSpec& domain, std::size_t flat) {
  const auto idx = domain.unflatten(flat);
  const auto n = domain.points_per_axis();
  double r2 = 0.0;
  for (int a = 0; a < domain.dimension(); ++a) {
    const auto m = idx[static_cast<std::size_t>(a)];
    const double offset = m <= n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
    r2 += offset * offset;
  }
  return std::sqrt(r2) * domain.dx();
}

void finalize(DiscreteKernel& k) {
  const double vol = k.domain.cell_volume();
  double r0 = 0.0;
  for (double p : k.phi_grid) r0 += p * p;
  k.R0 = r0 * vol;

  SpectralGrid grid(k.domain);
  std::copy(k.phi_grid.begin(), k.phi_grid.end(), grid.real().begin());
  grid.forward();
  const auto spec = grid.spectrum();
  k.noise_multiplier.resize(spec.size());
  k.covariance_spectrum.resize(spec.size());
  for (std::size_t s = 0; s < spec.size(); ++s) {
    k.noise_multiplier[s] = vol * spec[s];
    k.covariance_spectrum[s] = vol * std::norm(spec[s]);
  }
}

}  // namespace

DiscreteKernel build_kernel(const KernelSpec& spec, const DomainSpec& domain) {
  DiscreteKernel k{spec, domain, {}, 0.0, {}, {}};
  k.phi_grid.assign(domain.cell_count(), 0.0);

  if (spec.kind == KernelKind::White) {
    if (domain.dimension() != 1) {
      fail(ErrorCode::UnsupportedWhiteNoise,
           "kernel.kind=white requires domain.dimension=1 (got " + std::to_string(domain.dimension()) + ")");
    }
    k.phi_grid[0] = 1.0 / domain.dx();
    finalize(k);
    return k;
  }

  const double h = spec.effective_half_width();
  if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "kernel half width must be positive");
  if (h >= 0.5 * domain.side_length()) {
    fail(ErrorCode::KernelTooWide, "kernel support radius " + std::to_string(h) +
                                       " must be below half the side length " +
                                       std::to_string(0.5 * domain.side_length()));
  }
  if (h <= domain.dx()) {
    fail(ErrorCode::UnresolvableKernel, "kernel half width does not span a grid cell");
  }

  double mass = 0.0;
  for (std::size_t i = 0; i < domain.cell_count(); ++i) {
    const double v = profile(spec.shape, wrapped_radius(domain, i) / h);
    k.phi_grid[i] = v;
    mass += v;
  }
  const double scale = 1.0 / (mass * domain.cell_volume());
  for (double& v : k.phi_grid) v *= scale;
  finalize(k);
  return k;
}

DiscreteKernel rescale_kernel(const DiscreteKernel& kernel, double eps, const DomainSpec& domain) {
  if (domain.dimension() != 2) fail(ErrorCode::InvalidArgument, "kernel rescaling is defined for d=2");
  if (kernel.is_white()) fail(ErrorCode::WhiteNoiseUnsupported, "cannot rescale the white kernel");
  if (!(eps > 0.0 && eps <= 1.0)) fail(ErrorCode::InvalidArgument, "eps must lie in (0, 1]");
  if (eps == 1.0) return kernel;

  KernelSpec spec = kernel.spec;
  spec.epsilon = kernel.spec.epsilon.value_or(1.0) * eps;
  if (spec.effective_half_width() < 4.0 * domain.dx()) {
    fail(ErrorCode::UnresolvableKernel, "rescaled half width " + std::to_string(spec.effective_half_width()) +
                                            " is below 4 grid cells (dx=" + std::to_string(domain.dx()) + ")");
  }
  return build_kernel(spec, domain);
}

std::vector<double> covariance_grid(const DiscreteKernel& kernel) {
  SpectralGrid grid(kernel.domain);
  auto spec = grid.spectrum();
  for (std::size_t s = 0; s < spec.size(); ++s) spec[s] = kernel.covariance_spectrum[s];
  grid.backward();
  return {grid.real().begin(), grid.real().end()};
}

}  // namespace amshe
