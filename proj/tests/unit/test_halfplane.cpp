#include <algorithm>
#include <cmath>

#include "amshe/errors.hpp"
#include "amshe/halfplane.hpp"
#include "amshe/stats.hpp"
#include "doctest.h"

using namespace amshe;

namespace {

std::vector<double> exits(double a, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& y : out) y = brownian_halfplane_oracle(a, rng);
  return out;
}

}  // namespace

TEST_CASE("half-plane exits from a = 1 are Cauchy(1)") {
  const auto ys = exits(1.0, 100000, 1);
  CHECK(ks_distance(ys, [](double x) { return cauchy_cdf(x, {1.0}); }) < 0.01);
  // Median is zero within 4 SE; the median of Cauchy(c) has SE pi c / (2 sqrt n).
  const auto s = robust_summary(ys);
  CHECK(std::abs(s.median) < 4.0 * std::acos(-1.0) / (2.0 * std::sqrt(1e5)));
  const auto fit = ecf_fit(ys, default_lambda_grid(ys));
  CHECK(fit.scale == doctest::Approx(1.0).epsilon(0.05));
  CHECK_FALSE(fit.non_cauchy);
}

TEST_CASE("half-plane exits from a = 2 have IQR 4") {
  const auto ys = exits(2.0, 100000, 2);
  CHECK(robust_summary(ys).iqr == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("half-plane start on the boundary") {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) CHECK(brownian_halfplane_oracle(0.0, rng) == 0.0);
  CHECK_THROWS_AS(brownian_halfplane_oracle(-1.0, rng), Error);
}

TEST_CASE("step cap raises RunawayPath") {
  Rng rng(4);
  HalfplaneOptions opts;
  opts.max_steps = 1;
  opts.depth_ratio = 1e6;
  try {
    for (int i = 0; i < 100; ++i) brownian_halfplane_oracle(1.0, rng, opts);
    FAIL("expected RunawayPath");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RunawayPath);
  }
}
