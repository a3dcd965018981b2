#include <algorithm>
#include <cmath>

#include "amshe/errors.hpp"
#include "experiments_internal.hpp"

namespace amshe {

namespace {

struct EnsembleOutcome {
  std::vector<AdjointSummary> paths;
  double converged_fraction = 0.0;
};

EnsembleOutcome run_family(const ExperimentConfig& config, const DiscreteKernel& kernel, const MeasureSpec& mu,
                           std::uint64_t family) {
  EnsembleSpec spec;
  spec.mu = mu;
  spec.params = config.scheme;
  spec.T_max = config.t_max;
  spec.record_every = config.record_every;
  spec.threshold = config.threshold;
  spec.times = config.numbers("run.t_ladder");
  if (config.scheme.alpha != 0.0) spec.q_levels = config.numbers("run.q_bins");
  spec.family = family;
  EnsembleOutcome out;
  out.paths = run_adjoint_ensemble(kernel, spec, config.n_paths, config.base_seed, config.workers);
  const auto converged = std::count_if(out.paths.begin(), out.paths.end(), [](const auto& p) { return p.converged; });
  out.converged_fraction = static_cast<double>(converged) / static_cast<double>(std::max<std::size_t>(out.paths.size(), 1));
  return out;
}

void evaluate_family(const ExperimentConfig& config, const EnsembleOutcome& ens, const MeasureSpec& mu,
                     const std::string& prefix, std::uint64_t family, ExperimentReport& report) {
  const double alpha = config.scheme.alpha;
  const double beta = config.scheme.beta;
  const double target = alpha * mu.total_mass() / beta;

  std::vector<double> n_end;
  std::uint64_t clips = 0;
  std::uint64_t cell_steps = 0;
  for (std::size_t i = 0; i < ens.paths.size(); ++i) {
    const auto& p = ens.paths[i];
    if (p.converged) n_end.push_back(p.N_end);
    clips += p.noise_clips;
    cell_steps += p.cell_steps;
    report.path_records.push_back(adjoint_path_record(p, report.config_digest, prefix, i));
  }
  report.criteria.push_back(detail::check_within(prefix + ".converged_fraction", ens.converged_fraction, 0.95, 1.0));
  const double clip_fraction = cell_steps == 0 ? 0.0 : static_cast<double>(clips) / static_cast<double>(cell_steps);
  report.criteria.push_back(detail::check_below(prefix + ".noise_clip_fraction", clip_fraction, 1e-3));

  if (target == 0.0) {
    // Checked on every path, converged or not.
    const bool all_zero =
        std::all_of(ens.paths.begin(), ens.paths.end(), [](const auto& p) { return p.N_end == 0.0; });
    report.criteria.push_back({prefix + ".all_N_end_zero", all_zero, "every N_end == 0", all_zero});
    return;
  }
  if (n_end.empty()) return;
  const auto null_sims = static_cast<std::size_t>(config.integer("run.ks_null_sims"));
  const auto check = detail::compare_with_cauchy(n_end, target, null_sims, config.base_seed + family);
  report.criteria.push_back(detail::check_below(prefix + ".ks", check.ks, 0.05));
  report.diagnostics[prefix + ".cauchy"] = detail::cauchy_json(check, target, n_end.size());
  report.tables[prefix + "_qq"] = detail::cauchy_qq_table(std::move(n_end), target);

  detail::evaluate_time_change(ens.paths, config.numbers("run.q_bins"), report, prefix + ".");
}

}  // namespace

ExperimentReport run_strong_disorder_cauchy(const ExperimentConfig& config) {
  detail::Stopwatch clock;
  auto report = detail::start_report(config);
  const auto kernel = detail::kernel_for(config);
  const double min_converged = config.number("run.min_converged");
  const auto times = config.numbers("run.t_ladder");
  const double theta = config.number("run.theta");

  const std::vector<std::pair<std::string, MeasureSpec>> families = {
      {"delta", config.measure}, {"combination", config.measure_at("measure.combination")}};
  for (std::uint64_t f = 0; f < families.size(); ++f) {
    const auto& [name, mu] = families[f];
    if (!(mu.total_mass() > 0.0)) {
      fail(ErrorCode::DegenerateMeasure, name + ": the Cauchy target needs a measure of positive mass");
    }
    const auto ens = run_family(config, kernel, mu, f);
    if (ens.converged_fraction < min_converged) {
      fail(ErrorCode::InsufficientConvergence,
           name + ": only " + format_number(ens.converged_fraction) + " of paths reached M < " +
               format_number(config.threshold) + " by T_max = " + format_number(config.t_max) + "; raise run.t_max");
    }
    evaluate_family(config, ens, mu, name, f, report);
    detail::evaluate_fractional_moment(ens.paths, times, mu.total_mass(), theta, report, name + ".");
  }
  report.runtime_seconds = clock.seconds();
  return report;
}

}  // namespace amshe
