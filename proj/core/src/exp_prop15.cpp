#include <algorithm>

#include "amshe/halfplane.hpp"
#include "amshe/parallel.hpp"
#include "experiments_internal.hpp"

namespace amshe {

ExperimentReport run_prop15(const ExperimentConfig& config) {
  detail::Stopwatch clock;
  auto report = detail::start_report(config);
  const auto starts = config.numbers("run.starts");
  const auto null_sims = static_cast<std::size_t>(config.integer("run.ks_null_sims"));
  HalfplaneOptions options;
  options.dt = config.number("halfplane.dt");
  options.depth_ratio = config.number("halfplane.depth_ratio");

  CsvTable scales{{"a", "n", "ks", "ks_null_99", "iqr", "ecf_scale"}, {}};
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const double a = starts[k];
    const std::string tag = "a=" + format_number(a);
    auto exits = parallel_map(
        config.n_paths, config.workers, [] { return 0; },
        [&](int&, std::size_t i) {
          auto rng = make_rng(config.base_seed, family_path_index(k, i), StreamTag::Bridge);
          return brownian_halfplane_oracle(a, rng, options);
        });

    if (a == 0.0) {
      const bool all_zero = std::all_of(exits.begin(), exits.end(), [](double y) { return y == 0.0; });
      report.criteria.push_back({tag + ".all_exits_zero", all_zero, "every exit ordinate == 0", all_zero});
      continue;
    }
    const auto check = detail::compare_with_cauchy(exits, a, null_sims, config.base_seed + k);
    report.criteria.push_back(detail::check_below(tag + ".ks", check.ks, 0.01));
    report.criteria.push_back(detail::check_relative(tag + ".iqr", check.summary.iqr, 2.0 * a, 0.03));
    report.criteria.push_back(detail::check_relative(tag + ".ecf_scale", check.ecf.scale, a, 0.05));
    report.diagnostics[tag] = detail::cauchy_json(check, a, exits.size());
    scales.rows.push_back({a, static_cast<double>(exits.size()), check.ks, check.ks_null_99, check.summary.iqr,
                           check.ecf.scale});
    report.tables["qq_a" + format_number(a)] = detail::cauchy_qq_table(std::move(exits), a);
  }
  report.tables["scales"] = std::move(scales);
  report.runtime_seconds = clock.seconds();
  return report;
}

}  // namespace amshe
