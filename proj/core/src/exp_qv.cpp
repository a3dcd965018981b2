#include <cmath>

#include "amshe/errors.hpp"
#include "experiments_internal.hpp"

namespace amshe {

namespace {

struct QvStats {
  double dt = 0.0;
  double ratio_median = 0.0;
  double cross_median = 0.0;
  /// Median over paths of |increment QV - formula QV| / formula QV.
  double disagreement = 0.0;
  std::vector<AdjointSummary> paths;
};

QvStats qv_stats(const ExperimentConfig& config, const DiscreteKernel& kernel, double dt, std::uint64_t family) {
  EnsembleSpec spec;
  spec.mu = config.measure;
  spec.params = config.scheme;
  spec.params.dt = dt;
  spec.T_max = config.t_max;
  spec.record_every = config.record_every;
  spec.threshold = config.threshold;
  spec.q_levels = config.numbers("run.q_bins");
  spec.family = family;
  QvStats s;
  s.dt = dt;
  s.paths = run_adjoint_ensemble(kernel, spec, config.n_paths, config.base_seed, config.workers);
  std::vector<double> ratio, cross, gap;
  for (const auto& p : s.paths) {
    ratio.push_back(p.qv_N_inc / p.qv_M_inc);
    cross.push_back(std::abs(p.cross_inc) / std::sqrt(p.qv_M_inc * p.qv_N_inc));
    gap.push_back(std::abs(p.qv_M_inc - p.qv_M_formula) / p.qv_M_formula);
  }
  s.ratio_median = detail::median_of(ratio);
  s.cross_median = detail::median_of(cross);
  s.disagreement = detail::median_of(gap);
  return s;
}

}  // namespace

ExperimentReport run_qv_consistency(const ExperimentConfig& config) {
  detail::Stopwatch clock;
  auto report = detail::start_report(config);
  const double alpha = config.scheme.alpha;
  const double beta = config.scheme.beta;
  if (alpha == 0.0) fail(ErrorCode::DegenerateAlpha, "QV consistency needs scheme.alpha > 0");
  const auto kernel = detail::kernel_for(config);
  const double ratio_target = (alpha * alpha) / (beta * beta);

  const auto coarse = qv_stats(config, kernel, config.scheme.dt, 0);
  report.criteria.push_back(
      detail::check_within("ratio_median", coarse.ratio_median, 0.95 * ratio_target, 1.05 * ratio_target));
  report.criteria.push_back(detail::check_below("cross_median", coarse.cross_median, 0.05));
  report.criteria.push_back(detail::check_below("formula_disagreement", coarse.disagreement, 0.05));
  detail::evaluate_time_change(coarse.paths, config.numbers("run.q_bins"), report, "", false);
  for (std::size_t i = 0; i < coarse.paths.size(); ++i) {
    report.path_records.push_back(adjoint_path_record(coarse.paths[i], report.config_digest, "dt", i));
  }

  CsvTable refinement{{"dt", "ratio_median", "cross_median", "disagreement"}, {}};
  refinement.rows.push_back({coarse.dt, coarse.ratio_median, coarse.cross_median, coarse.disagreement});
  if (config.flag("run.refine")) {
    const auto fine = qv_stats(config, kernel, config.scheme.dt / 2.0, 1);
    refinement.rows.push_back({fine.dt, fine.ratio_median, fine.cross_median, fine.disagreement});
    report.criteria.push_back(detail::check_below("formula_disagreement_half_dt", fine.disagreement, coarse.disagreement));
    report.criteria.push_back(detail::check_within("ratio_median_half_dt", fine.ratio_median, 0.95 * ratio_target,
                                                   1.05 * ratio_target));
  }
  report.tables["refinement"] = std::move(refinement);
  report.runtime_seconds = clock.seconds();
  return report;
}

}  // namespace amshe
