#include "amshe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/random/uniform_01.hpp>

#include "amshe/errors.hpp"

namespace amshe {

double cauchy_cdf(double x, CauchyLaw law) {
  if (law.c < 0.0) fail(ErrorCode::InvalidArgument, "Cauchy scale must be >= 0");
  if (law.c == 0.0) return x < 0.0 ? 0.0 : 1.0;
  return 0.5 + std::atan(x / law.c) / std::numbers::pi;
}

double cauchy_quantile(double p, CauchyLaw law) {
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::InvalidArgument, "quantile level must lie in (0, 1)");
  if (law.c == 0.0) return 0.0;
  return law.c * std::tan(std::numbers::pi * (p - 0.5));
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

MeanSe mean_and_se(std::span<const double> xs) {
  if (xs.empty()) fail(ErrorCode::EmptySample, "mean of an empty sample");
  const double n = static_cast<double>(xs.size());
  const double mean = pairwise_sum(xs) / n;
  if (xs.size() < 2) return {mean, 0.0};
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
  const double var = pairwise_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) fail(ErrorCode::EmptySample, "quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::InvalidArgument, "quantile level must lie in [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

RobustSummary robust_summary(std::vector<double> samples) {
  if (samples.size() < 4) fail(ErrorCode::EmptySample, "robust summary needs at least 4 samples");
  std::sort(samples.begin(), samples.end());
  return {quantile_sorted(samples, 0.5), quantile_sorted(samples, 0.75) - quantile_sorted(samples, 0.25)};
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.size() < 2) fail(ErrorCode::EmptySample, "KS distance needs at least 2 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) fail(ErrorCode::EmptySample, "two-sample KS needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_null_quantile(std::size_t n, double q, std::size_t n_sims, std::uint64_t seed) {
  if (n < 2 || n_sims < 10) fail(ErrorCode::InvalidArgument, "KS null simulation needs n >= 2 and >= 10 draws");
  std::vector<double> stats(n_sims);
  std::vector<double> u(n);
  for (std::size_t s = 0; s < n_sims; ++s) {
    Rng rng = make_rng(seed, s, StreamTag::NullCalibration);
    boost::random::uniform_01<double> unif;
    for (double& x : u) x = unif(rng);
    stats[s] = ks_distance(u, [](double x) { return x; });
  }
  std::sort(stats.begin(), stats.end());
  return quantile_sorted(stats, q);
}

double ks_permutation_quantile(const std::vector<double>& a, const std::vector<double>& b, double q,
                               std::size_t n_perm, std::uint64_t seed) {
  if (a.empty() || b.empty()) fail(ErrorCode::EmptySample, "permutation null needs nonempty samples");
  std::vector<double> pool(a);
  pool.insert(pool.end(), b.begin(), b.end());
  std::vector<double> stats(n_perm);
  for (std::size_t s = 0; s < n_perm; ++s) {
    Rng rng = make_rng(seed, s, StreamTag::NullCalibration);
    // Fisher-Yates with an explicit index draw keeps the permutation independent of the standard library.
    for (std::size_t i = pool.size() - 1; i > 0; --i) {
      const auto k = static_cast<std::size_t>(rng() % (i + 1));
      std::swap(pool[i], pool[k]);
    }
    const auto mid = pool.begin() + static_cast<std::ptrdiff_t>(a.size());
    stats[s] = ks_two_sample(std::vector<double>(pool.begin(), mid), std::vector<double>(mid, pool.end()));
  }
  std::sort(stats.begin(), stats.end());
  return quantile_sorted(stats, q);
}

EcfFit ecf_fit(std::span<const double> samples, const std::vector<double>& lambda_grid) {
  if (samples.empty()) fail(ErrorCode::EmptySample, "ECF fit of an empty sample");
  if (lambda_grid.size() < 3) fail(ErrorCode::DegenerateGrid, "ECF fit needs at least 3 lambda values");
  EcfFit fit;
  fit.lambdas = lambda_grid;
  std::vector<double> re(samples.size()), im(samples.size());
  double sxy = 0.0, sxx = 0.0;
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) fail(ErrorCode::DegenerateGrid, "lambda values must be positive");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      re[i] = std::cos(lambda * samples[i]);
      im[i] = std::sin(lambda * samples[i]);
    }
    const double n = static_cast<double>(samples.size());
    const double modulus = std::hypot(pairwise_sum(re) / n, pairwise_sum(im) / n);
    if (!(modulus > 0.0)) fail(ErrorCode::DegenerateGrid, "ECF vanishes at lambda=" + std::to_string(lambda));
    const double y = -std::log(std::min(modulus, 1.0));
    fit.neg_log_modulus.push_back(y);
    sxy += lambda * y;
    sxx += lambda * lambda;
  }
  fit.scale = sxy / sxx;
  double rss = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    const double r = fit.neg_log_modulus[k] - fit.scale * lambda_grid[k];
    rss += r * r;
    syy += fit.neg_log_modulus[k] * fit.neg_log_modulus[k];
  }
  fit.relative_residual = syy > 0.0 ? std::sqrt(rss / syy) : 0.0;
  fit.non_cauchy = fit.relative_residual > kEcfResidualLimit;
  return fit;
}

std::vector<double> default_lambda_grid(std::span<const double> samples) {
  const auto summary = robust_summary(std::vector<double>(samples.begin(), samples.end()));
  const double s = summary.iqr > 0.0 ? 0.5 * summary.iqr : 1.0;
  std::vector<double> grid;
  for (int k = 1; k <= 8; ++k) grid.push_back(k / (4.0 * s));
  return grid;
}

MeanSe fractional_moment(std::span<const double> samples, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) fail(ErrorCode::InvalidArgument, "theta must lie in (0, 1]");
  std::vector<double> powered(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i] < 0.0) fail(ErrorCode::NegativeSample, "fractional moment of a negative sample");
    powered[i] = std::pow(samples[i], theta);
  }
  return mean_and_se(powered);
}

double lognormal_log_variance(double beta) {
  const double ratio = beta * beta / (2.0 * std::numbers::pi);
  if (!(ratio < 1.0)) fail(ErrorCode::SupercriticalBeta, "beta=" + std::to_string(beta) + " is not below sqrt(2 pi)");
  return -std::log1p(-ratio);
}

LognormalReport lognormal_subcritical_check(std::span<const double> samples, double beta, double trim_fraction) {
  LognormalReport r;
  r.beta = beta;
  r.sigma2 = lognormal_log_variance(beta);
  r.target_second_moment = std::exp(r.sigma2);
  r.trim_fraction = trim_fraction;
  r.n = samples.size();
  if (samples.size() < 4) fail(ErrorCode::EmptySample, "lognormal check needs at least 4 samples");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> sq(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) sq[i] = sorted[i] * sorted[i];
  r.second_moment = pairwise_sum(sq) / static_cast<double>(sq.size());
  const auto keep = sq.size() - static_cast<std::size_t>(std::floor(trim_fraction * static_cast<double>(sq.size())));
  r.second_moment_trimmed = pairwise_sum(std::span<const double>(sq).first(keep)) / static_cast<double>(keep);

  std::vector<double> logs;
  for (double x : sorted) {
    if (x > 0.0) {
      logs.push_back(std::log(x));
    } else {
      ++r.zeros;
    }
  }
  if (logs.size() >= 2) {
    const auto ms = mean_and_se(logs);
    r.log_mean = ms.mean;
    r.log_variance = ms.se * ms.se * static_cast<double>(logs.size());
  }
  return r;
}

double weighted_lp_norm(std::span<const double> field, double p, double xi, const DomainSpec& domain) {
  if (!(p >= 1.0)) fail(ErrorCode::InvalidArgument, "p must be >= 1");
  if (field.size() != domain.cell_count()) fail(ErrorCode::InvalidArgument, "field size mismatch");
  const bool weighted = domain.geometry() == Geometry::Line;
  if (weighted && !(xi > 0.0)) fail(ErrorCode::InvalidArgument, "xi must be positive");
  std::vector<double> terms(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double w = weighted ? std::exp(-xi * domain.distance_from_origin(i)) : 1.0;
    terms[i] = std::pow(std::abs(field[i]) * w, p);
  }
  return std::pow(pairwise_sum(terms) * domain.cell_volume(), 1.0 / p);
}

}  // namespace amshe
