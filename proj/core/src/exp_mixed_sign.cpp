#include <algorithm>
#include <cmath>

#include "experiments_internal.hpp"

namespace amshe {

// The law of the combination is open when the weights have mixed signs, so this
// run records quantiles only and carries no criteria.
ExperimentReport run_mixed_sign_explore(const ExperimentConfig& config) {
  detail::Stopwatch clock;
  auto report = detail::start_report(config);
  const auto kernel = detail::kernel_for(config);

  EnsembleSpec spec;
  spec.mu = config.measure;
  spec.params = config.scheme;
  spec.T_max = config.t_max;
  spec.record_every = config.record_every;
  spec.threshold = config.threshold;
  const auto paths = run_adjoint_ensemble(kernel, spec, config.n_paths, config.base_seed, config.workers);

  std::vector<double> n_settled, m_end;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    m_end.push_back(p.M_end);
    if (std::abs(p.M_end) < config.threshold) n_settled.push_back(p.N_end);
    report.path_records.push_back(adjoint_path_record(p, report.config_digest, "signed", i));
  }
  std::sort(n_settled.begin(), n_settled.end());
  std::sort(m_end.begin(), m_end.end());

  CsvTable table{{"p", "N_end_quantile", "M_end_quantile"}, {}};
  const std::vector<double> levels = {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99};
  Json quantiles = Json::array();
  for (double q : levels) {
    const double nq = n_settled.empty() ? std::nan("") : quantile_sorted(n_settled, q);
    const double mq = quantile_sorted(m_end, q);
    table.rows.push_back({q, nq, mq});
    quantiles.push_back(Json{{"p", q}, {"N_end", n_settled.empty() ? Json(nullptr) : Json(nq)}, {"M_end", mq}});
  }
  report.tables["quantiles"] = std::move(table);
  report.diagnostics["exploratory"] = true;
  report.diagnostics["signed_mass"] = config.measure.total_mass();
  report.diagnostics["settled_fraction"] = static_cast<double>(n_settled.size()) / static_cast<double>(paths.size());
  report.diagnostics["quantiles"] = std::move(quantiles);
  report.runtime_seconds = clock.seconds();
  return report;
}

}  // namespace amshe
