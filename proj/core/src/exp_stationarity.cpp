#include "amshe/errors.hpp"
#include "amshe/parallel.hpp"
#include "experiments_internal.hpp"

namespace amshe {

namespace {

struct PointSamples {
  double at_origin = 0.0;
  double at_shift = 0.0;
};

std::vector<PointSamples> zero_start_samples(const ExperimentConfig& config, const DiscreteKernel& kernel, double T,
                                             std::uint64_t family, std::size_t origin, std::size_t shifted) {
  return parallel_map(
      config.n_paths, config.workers, [&kernel] { return PathWorkspace(kernel); },
      [&](PathWorkspace& ws, std::size_t i) {
        auto streams = PathNoise::for_path(config.base_seed, family_path_index(family, i));
        const auto v = run_zero_start(config.scheme, ws, T, streams);
        return PointSamples{v.values[origin], v.values[shifted]};
      });
}

}  // namespace

ExperimentReport run_stationarity_check(const ExperimentConfig& config) {
  detail::Stopwatch clock;
  auto report = detail::start_report(config);
  const auto kernel = detail::kernel_for(config);
  const auto& domain = config.domain;
  const auto pair = config.numbers("run.t_pair");
  if (pair.size() != 2) fail(ErrorCode::ConfigValidation, "run.t_pair must hold two horizons");
  const auto perms = static_cast<std::size_t>(config.integer("run.null_perms"));
  const long shift = static_cast<long>(config.integer("run.shift"));

  const std::size_t origin = domain.snap(Point{0.0, 0.0, 0.0});
  const std::size_t shifted = domain.translate(origin, {shift, 0, 0});
  const auto first = zero_start_samples(config, kernel, pair[0], 0, origin, shifted);
  const auto second = zero_start_samples(config, kernel, pair[1], 1, origin, shifted);

  std::vector<double> a0, b0, b_shift;
  for (const auto& s : first) a0.push_back(s.at_origin);
  for (const auto& s : second) {
    b0.push_back(s.at_origin);
    b_shift.push_back(s.at_shift);
  }

  const std::string pair_name = "T" + format_number(pair[0]) + "_vs_T" + format_number(pair[1]);
  const double ks_time = ks_two_sample(a0, b0);
  const double null_time = ks_permutation_quantile(a0, b0, 0.99, perms, config.base_seed);
  report.criteria.push_back(detail::check_below(pair_name + ".ks", ks_time, null_time));

  const double ks_space = ks_two_sample(a0, b_shift);
  const double null_space = ks_permutation_quantile(a0, b_shift, 0.99, perms, config.base_seed + 1);
  report.criteria.push_back(detail::check_below("spatial_shift.ks", ks_space, null_space));
  report.diagnostics["samples"] = Json{{"n", a0.size()},
                                       {"median_first", detail::median_of(a0)},
                                       {"median_second", detail::median_of(b0)},
                                       {"shift_cells", shift}};

  // Coupled ladder: every rung is driven by the same noise on its window, so
  // consecutive rungs differ only through their start time.
  const auto ladder = config.numbers("run.t_ladder");
  const double p = config.number("run.p");
  const double xi = config.number("run.xi");
  const auto ladder_paths = static_cast<std::size_t>(config.integer("run.ladder_paths"));
  const auto diffs = parallel_map(
      ladder_paths, config.workers, [&kernel] { return PathWorkspace(kernel); },
      [&](PathWorkspace& ws, std::size_t i) {
        auto streams = PathNoise::for_path(config.base_seed, family_path_index(2, i));
        const auto feed = fresh_noise(ws.sampler(), streams, config.scheme.dt);
        const auto fields = run_ladder(config.scheme, ws, ladder, 0.0, FieldRole::AmsheV, feed);
        std::vector<double> d;
        std::vector<double> gap(domain.cell_count());
        for (std::size_t k = 0; k + 1 < fields.size(); ++k) {
          for (std::size_t c = 0; c < gap.size(); ++c) gap[c] = fields[k + 1].values[c] - fields[k].values[c];
          d.push_back(weighted_lp_norm(gap, p, xi, domain));
        }
        return d;
      });

  CsvTable table{{"T", "T_next", "median_difference"}, {}};
  std::vector<double> medians;
  for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
    std::vector<double> column;
    for (const auto& d : diffs) column.push_back(d[k]);
    medians.push_back(detail::median_of(column));
    table.rows.push_back({ladder[k], ladder[k + 1], medians.back()});
  }
  report.criteria.push_back(detail::check_strictly_decreasing("ladder.median_differences", medians));
  report.tables["ladder"] = std::move(table);
  report.runtime_seconds = clock.seconds();
  return report;
}

}  // namespace amshe
