#include <algorithm>
#include <cmath>
#include <numbers>

#include "amshe/domain.hpp"
#include "amshe/errors.hpp"
#include "amshe/kernel.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace amshe;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an amshe::Error");
  return ErrorCode::InvalidArgument;
}

double sum(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

}  // namespace

TEST_CASE("domain derives dx from N and L and enforces its limits") {
  const DomainSpec d(Geometry::Torus, 2, 1.5, 48);
  CHECK(d.dx() * 48 == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(d.cell_count() == 48 * 48);
  CHECK(d.cell_volume() == doctest::Approx(d.dx() * d.dx()));

  CHECK(code_of([] { DomainSpec(Geometry::Torus, 4, 1.0, 16); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { DomainSpec(Geometry::Torus, 1, 1.0, 4); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { DomainSpec(Geometry::Torus, 3, 1.0, 64, 1000); }) == ErrorCode::DomainTooLarge);
}

TEST_CASE("grid indexing round trips and translation wraps") {
  const DomainSpec d(Geometry::Torus, 3, 1.0, 8);
  for (std::size_t f = 0; f < d.cell_count(); f += 37) CHECK(d.flatten(d.unflatten(f)) == f);
  const auto moved = d.translate(d.flatten({7, 0, 3}), {1, -1, 2});
  CHECK(d.unflatten(moved) == CellIndex{0, 7, 5});

  const DomainSpec line(Geometry::Line, 1, 4.0, 16);
  CHECK(line.snap(Point{0.0, 0.0, 0.0}) == 8);
  CHECK(line.position(8)[0] == 0.0);
  CHECK(line.snap(Point{2.0, 0.0, 0.0}) == 0);  // wraps to -L/2

  std::vector<double> field(d.cell_count(), 0.0);
  field[d.flatten({1, 2, 3})] = 1.0;
  const auto shifted = translate_field(d, field, {2, 0, -4});
  CHECK(shifted[d.flatten({3, 2, 7})] == 1.0);
  CHECK(sum(shifted) == 1.0);
}

TEST_CASE("white kernel is the discrete delta") {
  const auto k = testing::white_1d(1.0, 10);
  CHECK(k.R0 == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(k.phi_grid[0] == doctest::Approx(10.0));
  CHECK(code_of([] {
          KernelSpec s;
          s.kind = KernelKind::White;
          build_kernel(s, DomainSpec(Geometry::Torus, 2, 1.0, 16));
        }) == ErrorCode::UnsupportedWhiteNoise);
}

TEST_CASE("bump samples match the closed-form profile and carry unit mass") {
  const DomainSpec d(Geometry::Torus, 1, 1.0, 200);
  const auto k = testing::kernel_1d(1.0, 200, 0.1);
  // Independent evaluation: c exp(-1 / (1 - (x/h)^2)) on the minimal-image distance.
  std::vector<double> ref(200);
  for (std::size_t i = 0; i < 200; ++i) {
    const double x = (i <= 100 ? static_cast<double>(i) : static_cast<double>(i) - 200.0) * d.dx();
    const double r = std::abs(x) / 0.1;
    ref[i] = r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0;
  }
  const double c = 1.0 / (sum(ref) * d.dx());
  for (std::size_t i = 0; i < 200; ++i) CHECK(k.phi_grid[i] == doctest::Approx(c * ref[i]).epsilon(1e-12));
  CHECK(sum(k.phi_grid) * d.dx() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::all_of(k.phi_grid.begin(), k.phi_grid.end(), [](double p) { return p >= 0.0; }));
  // Support lies inside the half width.
  for (std::size_t i = 0; i < 200; ++i) {
    const double x = std::min(i, 200 - i) * d.dx();
    if (x >= 0.1) CHECK(k.phi_grid[i] == 0.0);
  }
}

TEST_CASE("induced covariance has unit mass and matches the direct convolution") {
  const auto k = testing::kernel_1d(1.0, 128, 0.1);
  const auto R = covariance_grid(k);
  CHECK(sum(R) * k.domain.dx() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(R[0] == doctest::Approx(k.R0).epsilon(1e-12));
  // Direct O(N^2) evaluation of sum_w phi(z + w) phi(w) dx.
  for (std::size_t z : {0u, 3u, 7u, 12u, 125u}) {
    double direct = 0.0;
    for (std::size_t w = 0; w < 128; ++w) direct += k.phi_grid[(z + w) % 128] * k.phi_grid[w];
    CHECK(R[z] == doctest::Approx(direct * k.domain.dx()).epsilon(1e-10));
  }
  CHECK(R[5] == doctest::Approx(R[123]).epsilon(1e-12));
}

TEST_CASE("2D covariance spectrum is positive semidefinite") {
  for (auto shape : {KernelShape::Bump, KernelShape::Triangle}) {
    KernelSpec spec;
    spec.shape = shape;
    spec.half_width = 0.2;
    const auto k = build_kernel(spec, DomainSpec(Geometry::Torus, 2, 1.0, 64));
    const double peak = *std::max_element(k.covariance_spectrum.begin(), k.covariance_spectrum.end());
    const double low = *std::min_element(k.covariance_spectrum.begin(), k.covariance_spectrum.end());
    CHECK(low >= -1e-12 * peak);
  }
}

TEST_CASE("kernel size limits") {
  KernelSpec wide;
  wide.half_width = 0.6;
  CHECK(code_of([&] { build_kernel(wide, DomainSpec(Geometry::Torus, 1, 1.0, 64)); }) == ErrorCode::KernelTooWide);
}

TEST_CASE("rescaled kernels") {
  const DomainSpec d(Geometry::Torus, 2, 1.0, 256);
  KernelSpec spec;
  spec.half_width = 0.25;
  const auto base = build_kernel(spec, d);

  SUBCASE("eps = 1 is the identity") {
    const auto same = rescale_kernel(base, 1.0, d);
    CHECK(same.phi_grid == base.phi_grid);
    CHECK(same.R0 == base.R0);
  }
  SUBCASE("eps = 1/2 quadruples R(0)") {
    const auto half = rescale_kernel(base, 0.5, d);
    CHECK(half.R0 == doctest::Approx(4.0 * base.R0).epsilon(1e-6));
  }
  SUBCASE("mass of R^eps does not depend on eps") {
    const double vol = d.cell_volume();
    const double m1 = sum(covariance_grid(base)) * vol;
    for (double eps : {0.5, 0.25, 0.125}) {
      CHECK(sum(covariance_grid(rescale_kernel(base, eps, d))) * vol == doctest::Approx(m1).epsilon(0.01));
    }
  }
  SUBCASE("unresolvable scales are rejected") {
    CHECK(code_of([&] { rescale_kernel(base, 1.0 / 32.0, d); }) == ErrorCode::UnresolvableKernel);
  }
  SUBCASE("only d = 2") {
    const auto k1 = testing::kernel_1d(1.0, 64, 0.1);
    CHECK(code_of([&] { rescale_kernel(k1, 0.5, k1.domain); }) == ErrorCode::InvalidArgument);
  }
}
