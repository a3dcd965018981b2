#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "amshe/experiments.hpp"
#include "amshe/stats.hpp"

namespace amshe::detail {

Criterion check_below(const std::string& name, double measured, double bound);
Criterion check_above(const std::string& name, double measured, double bound);
Criterion check_within(const std::string& name, double measured, double lo, double hi);
Criterion check_relative(const std::string& name, double measured, double target, double rel_tol);
Criterion check_strictly_decreasing(const std::string& name, const std::vector<double>& values);

DiscreteKernel kernel_for(const ExperimentConfig& config);
/// Empty report stamped with the experiment name, digest and config values.
ExperimentReport start_report(const ExperimentConfig& config);

struct CauchyCheck {
  double ks = 0.0;
  double ks_null_99 = 0.0;
  RobustSummary summary;
  EcfFit ecf;
};

CauchyCheck compare_with_cauchy(const std::vector<double>& samples, double scale, std::size_t null_sims,
                                std::uint64_t seed);
Json cauchy_json(const CauchyCheck& c, double scale, std::size_t n);
/// Sample quantiles against Cauchy quantiles at 99 equally spaced levels.
CsvTable cauchy_qq_table(std::vector<double> samples, double scale);

/// Increment variance and W-X correlation over consecutive [M] levels. With
/// `as_criteria` false the bins only go to diagnostics and tables.
void evaluate_time_change(const std::vector<AdjointSummary>& paths, const std::vector<double>& q_levels,
                          ExperimentReport& report, const std::string& prefix, bool as_criteria = true);

/// m(T) = mean M_T^theta over a T-ladder with the T=0 rung.
void evaluate_fractional_moment(const std::vector<AdjointSummary>& paths, const std::vector<double>& times,
                                double mu_mass, double theta, ExperimentReport& report, const std::string& prefix);

double sample_correlation(const std::vector<double>& a, const std::vector<double>& b);
double sample_variance(const std::vector<double>& a);
double median_of(std::vector<double> xs);

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace amshe::detail
