#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "amshe/domain.hpp"
#include "amshe/spectral.hpp"

namespace amshe {

enum class KernelKind { White, Mollifier };
enum class KernelShape { Bump, Triangle };

std::string_view kernel_kind_name(KernelKind k);
std::string_view kernel_shape_name(KernelShape s);
KernelKind parse_kernel_kind(std::string_view name);
KernelShape parse_kernel_shape(std::string_view name);

struct KernelSpec {
  KernelKind kind = KernelKind::Mollifier;
  KernelShape shape = KernelShape::Bump;
  double half_width = 0.1;
  /// Rescaling factor: the sampled mollifier is eps^-d phi(x / eps).
  std::optional<double> epsilon;

  double effective_half_width() const noexcept { return half_width * epsilon.value_or(1.0); }
};

/// Grid-sampled mollifier phi and the covariance R = phi * phi it induces.
///
/// phi is normalized to unit discrete mass (sum phi dx^d = 1), so the induced
/// covariance also has unit mass. The white kernel is the discrete delta
/// phi = 1/dx at the origin, which makes convolution the identity and R0 = 1/dx.
struct DiscreteKernel {
  KernelSpec spec;
  DomainSpec domain;
  std::vector<double> phi_grid;
  /// R(0) = sum phi^2 dx^d.
  double R0 = 0.0;
  /// dx^d * DFT(phi): multiplies DFT(w) to give DFT(phi (*) w).
  std::vector<Complex> noise_multiplier;
  /// DFT of the discrete covariance R, equal to dx^d |DFT(phi)|^2.
  std::vector<double> covariance_spectrum;

  bool is_white() const noexcept { return spec.kind == KernelKind::White; }
};

DiscreteKernel build_kernel(const KernelSpec& spec, const DomainSpec& domain);

/// Kernel whose induced covariance is eps^-d R(y / eps). Defined for d = 2.
DiscreteKernel rescale_kernel(const DiscreteKernel& kernel, double eps, const DomainSpec& domain);

/// Discrete covariance R(z) = sum_w phi(z + w) phi(w) dx^d on the grid (via FFT).
std::vector<double> covariance_grid(const DiscreteKernel& kernel);

}  // namespace amshe
