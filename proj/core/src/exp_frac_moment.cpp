#include "experiments_internal.hpp"

namespace amshe {

ExperimentReport run_fractional_moment(const ExperimentConfig& config) {
  detail::Stopwatch clock;
  auto report = detail::start_report(config);
  const auto kernel = detail::kernel_for(config);

  EnsembleSpec spec;
  spec.mu = config.measure;
  spec.params = config.scheme;
  spec.T_max = config.t_max;
  spec.record_every = config.record_every;
  spec.threshold = config.threshold;
  spec.times = config.numbers("run.t_ladder");
  const auto paths = run_adjoint_ensemble(kernel, spec, config.n_paths, config.base_seed, config.workers);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    report.path_records.push_back(adjoint_path_record(paths[i], report.config_digest, "ladder", i));
  }
  detail::evaluate_fractional_moment(paths, spec.times, config.measure.total_mass(), config.number("run.theta"), report,
                                     "");
  report.runtime_seconds = clock.seconds();
  return report;
}

}  // namespace amshe
