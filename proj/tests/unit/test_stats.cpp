#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "amshe/errors.hpp"
#include "amshe/stats.hpp"
#include "doctest.h"

using namespace amshe;

namespace {

constexpr double kPi = std::numbers::pi;

/// Direct Cauchy sampler: c tan(pi (U - 1/2)).
std::vector<double> cauchy_draws(std::size_t n, double c, std::uint64_t seed) {
  Rng rng(seed);
  boost::random::uniform_01<double> u;
  std::vector<double> out(n);
  for (auto& x : out) x = c * std::tan(kPi * (u(rng) - 0.5));
  return out;
}

std::vector<double> normal_draws(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  boost::random::normal_distribution<double> z;
  std::vector<double> out(n);
  for (auto& x : out) x = z(rng);
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("Cauchy cdf and quantile") {
  CHECK(cauchy_cdf(0.0, {1.0}) == 0.5);
  CHECK(cauchy_cdf(1.0, {1.0}) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(cauchy_cdf(2.0, {2.0}) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(cauchy_cdf(-std::numeric_limits<double>::infinity(), {1.0}) == 0.0);
  CHECK(cauchy_cdf(std::numeric_limits<double>::infinity(), {1.0}) == 1.0);
  CHECK(cauchy_cdf(-1e-9, {0.0}) == 0.0);
  CHECK(cauchy_cdf(0.0, {0.0}) == 1.0);
  double prev = 0.0;
  for (double x = -50.0; x <= 50.0; x += 0.37) {
    const double F = cauchy_cdf(x, {1.7});
    CHECK(F >= prev);
    CHECK(F == doctest::Approx(cauchy_cdf(x / 1.7, {1.0})).epsilon(1e-14));
    prev = F;
  }
  for (double p : {0.01, 0.25, 0.5, 0.9}) CHECK(cauchy_cdf(cauchy_quantile(p, {3.0}), {3.0}) == doctest::Approx(p));
  CHECK(cauchy_quantile(0.75, {2.0}) == doctest::Approx(2.0));
}

TEST_CASE("KS distance") {
  const std::size_t n = 500;
  std::vector<double> exact;
  for (std::size_t i = 1; i <= n; ++i) exact.push_back(cauchy_quantile((i - 0.5) / n, {1.0}));
  auto cdf = [](double x) { return cauchy_cdf(x, {1.0}); };
  CHECK(ks_distance(exact, cdf) == doctest::Approx(0.5 / n).epsilon(1e-9));

  CHECK(ks_distance(std::vector<double>(10, 0.3), cdf) >= 0.5);
  CHECK(code_of([&] { ks_distance({}, cdf); }) == ErrorCode::EmptySample);

  // Invariance under a strictly increasing map applied to both sides.
  auto draws = cauchy_draws(2000, 1.0, 3);
  const double base = ks_distance(draws, cdf);
  std::vector<double> mapped;
  for (double x : draws) mapped.push_back(std::atan(x));
  CHECK(ks_distance(mapped, [](double y) { return 0.5 + y / kPi; }) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("KS of Cauchy draws sits under the simulated null quantile") {
  const std::size_t n = 100000;
  const double q99 = ks_null_quantile(n, 0.99, 200, 17);
  CHECK(q99 == doctest::Approx(1.63 / std::sqrt(static_cast<double>(n))).epsilon(0.1));
  const auto draws = cauchy_draws(n, 1.0, 4);
  CHECK(ks_distance(draws, [](double x) { return cauchy_cdf(x, {1.0}); }) < 0.0061);
}

TEST_CASE("two-sample KS and permutation null") {
  const auto a = normal_draws(400, 5);
  const auto b = normal_draws(400, 6);
  const double d = ks_two_sample(a, b);
  CHECK(d < ks_permutation_quantile(a, b, 0.99, 200, 7));
  CHECK(ks_two_sample(a, a) == 0.0);
  auto shifted = b;
  for (auto& x : shifted) x += 1.0;
  CHECK(ks_two_sample(a, shifted) > ks_permutation_quantile(a, shifted, 0.99, 200, 7));
}

TEST_CASE("ECF scale fit") {
  const std::vector<double> grid{0.1, 0.2, 0.3, 0.4};
  CHECK(ecf_fit(std::vector<double>(20, 0.0), grid).scale == 0.0);
  CHECK(code_of([&] { ecf_fit(std::vector<double>(20, 1.0), {0.1, 0.2}); }) == ErrorCode::DegenerateGrid);
  CHECK(code_of([&] { ecf_fit(std::vector<double>(20, 1.0), {0.1, -0.2, 0.3}); }) == ErrorCode::DegenerateGrid);

  for (double c : {0.5, 1.0, 2.0}) {
    const auto draws = cauchy_draws(100000, c, 10 + static_cast<std::uint64_t>(4 * c));
    const auto fit = ecf_fit(draws, default_lambda_grid(draws));
    CAPTURE(c);
    CHECK(fit.scale == doctest::Approx(c).epsilon(0.05));
    CHECK_FALSE(fit.non_cauchy);
  }
  const auto gauss = normal_draws(100000, 11);
  const auto fit = ecf_fit(gauss, default_lambda_grid(gauss));
  CHECK(fit.relative_residual > kEcfResidualLimit);
  CHECK(fit.non_cauchy);
}

TEST_CASE("robust summary") {
  const auto s = robust_summary({1.0, 2.0, 3.0, 4.0});
  CHECK(s.median == 2.5);
  CHECK(s.iqr == 1.5);
  const auto t = robust_summary({11.0, 12.0, 13.0, 14.0});
  CHECK(t.median == 12.5);
  CHECK(t.iqr == 1.5);
  CHECK(code_of([] { robust_summary({1.0, 2.0, 3.0}); }) == ErrorCode::EmptySample);

  const auto c = robust_summary(cauchy_draws(100000, 1.5, 12));
  CHECK(std::abs(c.median) < 0.03);
  CHECK(c.iqr == doctest::Approx(3.0).epsilon(0.03));

  const std::vector<double> sorted{0.0, 10.0};
  CHECK(quantile_sorted(sorted, 0.25) == 2.5);
}

TEST_CASE("fractional moments") {
  const auto ones = fractional_moment(std::vector<double>(50, 1.0), 0.5);
  CHECK(ones.mean == 1.0);
  CHECK(ones.se == 0.0);
  CHECK(code_of([] { fractional_moment(std::vector<double>{1.0, -0.1}, 0.5); }) == ErrorCode::NegativeSample);

  // Scaling every sample by k multiplies the estimate by k^theta.
  std::vector<double> xs;
  for (int i = 1; i <= 100; ++i) xs.push_back(0.01 * i * i);
  std::vector<double> scaled;
  for (double x : xs) scaled.push_back(3.0 * x);
  CHECK(fractional_moment(scaled, 0.3).mean == doctest::Approx(std::pow(3.0, 0.3) * fractional_moment(xs, 0.3).mean));

  // theta near 1 gives back the sample mean of mean-one samples.
  Rng rng(13);
  boost::random::uniform_01<double> u;
  std::vector<double> mart;
  for (int i = 0; i < 20000; ++i) mart.push_back(-std::log(u(rng)));
  const auto m = fractional_moment(mart, 0.999);
  CHECK(std::abs(m.mean - 1.0) < 4.0 * m.se);
}

TEST_CASE("lognormal subcritical law") {
  CHECK(lognormal_log_variance(2.0) == doctest::Approx(std::log(1.0 / (1.0 - 4.0 / (2.0 * kPi)))).epsilon(1e-14));
  CHECK(lognormal_log_variance(2.0) == doctest::Approx(1.01230).epsilon(1e-5));
  CHECK(lognormal_log_variance(1e-4) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(code_of([] { lognormal_log_variance(2.6); }) == ErrorCode::SupercriticalBeta);

  // Direct sampling of exp(Z - sigma^2/2) reproduces the target second moment.
  const double beta = 1.0;
  const double sigma2 = lognormal_log_variance(beta);
  const auto z = normal_draws(200000, 14);
  std::vector<double> samples;
  for (double x : z) samples.push_back(std::exp(std::sqrt(sigma2) * x - 0.5 * sigma2));
  const auto rep = lognormal_subcritical_check(samples, beta);
  CHECK(rep.target_second_moment == doctest::Approx(1.0 / (1.0 - 1.0 / (2.0 * kPi))).epsilon(1e-14));
  CHECK(rep.target_second_moment == doctest::Approx(1.1893).epsilon(1e-4));
  CHECK(rep.second_moment == doctest::Approx(rep.target_second_moment).epsilon(0.01));
  CHECK(rep.log_mean == doctest::Approx(-0.5 * sigma2).epsilon(0.02));
  CHECK(rep.log_variance == doctest::Approx(sigma2).epsilon(0.02));
  CHECK(rep.second_moment_trimmed <= rep.second_moment);
}

TEST_CASE("weighted Lp norm") {
  const DomainSpec torus(Geometry::Torus, 2, 1.0, 16);
  CHECK(weighted_lp_norm(std::vector<double>(256, 0.0), 2.0, 1.0, torus) == 0.0);
  for (double p : {1.0, 2.0, 3.5}) {
    CHECK(weighted_lp_norm(std::vector<double>(256, 1.0), p, 0.7, torus) == doctest::Approx(1.0).epsilon(1e-13));
  }
  const DomainSpec line(Geometry::Line, 1, 30.0, 3000);
  CHECK(weighted_lp_norm(std::vector<double>(3000, 1.0), 1.0, 1.0, line) ==
        doctest::Approx(2.0).epsilon(std::exp(-15.0) + 1e-4));
}

TEST_CASE("pairwise sums and mean/SE") {
  std::vector<double> xs(1000, 0.1);
  CHECK(pairwise_sum(xs) == doctest::Approx(100.0).epsilon(1e-14));
  const auto m = mean_and_se(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == 2.5);
  CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}
