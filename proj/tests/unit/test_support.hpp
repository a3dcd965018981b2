#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "amshe/domain.hpp"
#include "amshe/kernel.hpp"

namespace amshe::testing {

inline DiscreteKernel kernel_1d(double L, std::size_t n, double h, KernelShape shape = KernelShape::Bump) {
  KernelSpec spec;
  spec.shape = shape;
  spec.half_width = h;
  return build_kernel(spec, DomainSpec(Geometry::Torus, 1, L, n));
}

inline DiscreteKernel white_1d(double L, std::size_t n) {
  KernelSpec spec;
  spec.kind = KernelKind::White;
  return build_kernel(spec, DomainSpec(Geometry::Torus, 1, L, n));
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  /// Standard error of the mean.
  double se = 0.0;
  /// Standard error of the variance estimate, from the fourth central moment.
  double var_se = 0.0;
};

inline Moments moments(std::span<const double> xs) {
  Moments m;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) m.mean += x;
  m.mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = (x - m.mean) * (x - m.mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  m.var = m2 * n / (n - 1.0);
  m.se = std::sqrt(m.var / n);
  m.var_se = std::sqrt((m4 - m2 * m2) / n);
  return m;
}

}  // namespace amshe::testing
