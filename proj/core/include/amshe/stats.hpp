#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "amshe/domain.hpp"
#include "amshe/seeds.hpp"

namespace amshe {

/// Cauchy(c) with density 1 / (pi c (1 + (x/c)^2)); c = 0 is the point mass at 0.
struct CauchyLaw {
  double c = 1.0;
};

double cauchy_cdf(double x, CauchyLaw law);
double cauchy_quantile(double p, CauchyLaw law);

/// Sum with pairwise (cascade) splitting; the result depends only on the order of `xs`.
double pairwise_sum(std::span<const double> xs);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(std::span<const double> xs);

/// Quantile with linear interpolation between order statistics (type 7). `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double p);

struct RobustSummary {
  double median = 0.0;
  double iqr = 0.0;
};

RobustSummary robust_summary(std::vector<double> samples);

/// sup_x |F_n(x) - cdf(x)|.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

/// sup_x |F_a(x) - F_b(x)|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Quantile q of the one-sample KS statistic at sample size n under the null,
/// simulated with uniform samples (the statistic is distribution-free).
double ks_null_quantile(std::size_t n, double q, std::size_t n_sims, std::uint64_t seed);

/// Quantile q of the two-sample KS statistic under random relabelling of the pooled samples.
double ks_permutation_quantile(const std::vector<double>& a, const std::vector<double>& b, double q,
                               std::size_t n_perm, std::uint64_t seed);

struct EcfFit {
  double scale = 0.0;
  /// sqrt(sum (y - c lambda)^2 / sum y^2) with y = -log |ECF(lambda)|.
  double relative_residual = 0.0;
  bool non_cauchy = false;
  std::vector<double> lambdas;
  std::vector<double> neg_log_modulus;
};

inline constexpr double kEcfResidualLimit = 0.05;

/// Least-squares fit through the origin of -log |mean exp(i lambda X)| against lambda.
EcfFit ecf_fit(std::span<const double> samples, const std::vector<double>& lambda_grid);

/// lambda_k = k / (4 s), k = 1..8, with s half the sample IQR (1 if the IQR vanishes).
std::vector<double> default_lambda_grid(std::span<const double> samples);

/// Mean and standard error of M^theta.
MeanSe fractional_moment(std::span<const double> samples, double theta);

/// sigma^2 = log 1 / (1 - beta^2 / 2pi).
double lognormal_log_variance(double beta);

struct LognormalReport {
  double beta = 0.0;
  double sigma2 = 0.0;
  double target_second_moment = 0.0;
  double second_moment = 0.0;
  double second_moment_trimmed = 0.0;
  double trim_fraction = 0.0;
  double log_mean = 0.0;
  double log_variance = 0.0;
  std::size_t n = 0;
  std::size_t zeros = 0;
};

/// Compares samples of the subcritical limit against exp(Z - Var Z / 2), Z ~ N(0, sigma^2).
LognormalReport lognormal_subcritical_check(std::span<const double> samples, double beta,
                                            double trim_fraction = 1e-3);

/// (sum |z|^p w^p dx^d)^{1/p}; w = 1 on the torus and exp(-xi |x|) on the line box.
double weighted_lp_norm(std::span<const double> field, double p, double xi, const DomainSpec& domain);

}  // namespace amshe
