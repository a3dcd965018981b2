#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "amshe/config.hpp"
#include "amshe/kernel.hpp"
#include "amshe/records.hpp"
#include "amshe/solver.hpp"

namespace amshe {

/// One checked statement: what was measured and the bound it was held to.
struct Criterion {
  std::string name;
  Json measured;
  std::string tolerance;
  bool pass = false;
};

struct ExperimentReport {
  std::string experiment;
  std::string config_digest;
  /// Materialized config values, echoed into the summary.
  Json config = Json::object();
  std::vector<Criterion> criteria;
  Json diagnostics = Json::object();
  std::map<std::string, CsvTable> tables;
  std::vector<Json> path_records;
  double runtime_seconds = 0.0;

  bool all_pass() const;
  const Criterion& criterion(const std::string& name) const;
  /// Summary record. Runtime is left out so the bytes depend only on config and seed.
  Json summary_json() const;
};

/// Writes summary.json, paths.ndjson, one CSV per table and runtime.json into `dir`.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

ExperimentReport run_experiment(const ExperimentConfig& config);

ExperimentReport run_prop15(const ExperimentConfig& config);
ExperimentReport run_strong_disorder_cauchy(const ExperimentConfig& config);
ExperimentReport run_qv_consistency(const ExperimentConfig& config);
ExperimentReport run_weak_disorder_probe(const ExperimentConfig& config);
ExperimentReport run_stationarity_check(const ExperimentConfig& config);
ExperimentReport run_2d_attenuated(const ExperimentConfig& config);
ExperimentReport run_fractional_moment(const ExperimentConfig& config);
ExperimentReport run_mixed_sign_explore(const ExperimentConfig& config);

/// Reduced record of one adjoint run; the full trajectory is discarded.
struct AdjointSummary {
  double M_end = 0.0;
  double N_end = 0.0;
  bool converged = false;
  double qv_M_inc = 0.0;
  double qv_N_inc = 0.0;
  double cross_inc = 0.0;
  double qv_M_formula = 0.0;
  /// M at each requested time.
  std::vector<double> M_at;
  /// (W, X) at each requested [M] level; `reached` is 0 where the path stopped short.
  std::vector<double> W_at_q;
  std::vector<double> X_at_q;
  std::vector<std::uint8_t> reached;
  std::uint64_t noise_clips = 0;
  std::uint64_t cell_steps = 0;
};

struct EnsembleSpec {
  MeasureSpec mu;
  SchemeParams params;
  double T_max = 0.0;
  std::size_t record_every = 1;
  double threshold = 1e-3;
  std::vector<double> times;
  std::vector<double> q_levels;
  /// Path-index family, keeping ensembles within one experiment independent.
  std::uint64_t family = 0;
};

std::vector<AdjointSummary> run_adjoint_ensemble(const DiscreteKernel& kernel, const EnsembleSpec& spec,
                                                 std::size_t n_paths, std::uint64_t base_seed, unsigned workers);

/// E u(x)^2 after `steps` lattice MSHE steps from u = 1, by the exact two-point
/// recursion C <- H^2 [(1 + beta^2 dt R) C] (factor clipping ignored).
double lattice_second_moment(const DiscreteKernel& kernel, double beta, double dt, std::size_t steps);

Json adjoint_path_record(const AdjointSummary& s, const std::string& digest, const std::string& ensemble,
                         std::size_t index);

}  // namespace amshe
