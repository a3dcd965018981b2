#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "amshe/errors.hpp"
#include "amshe/martingale.hpp"
#include "amshe/parallel.hpp"
#include "experiments_internal.hpp"

namespace amshe {

namespace detail {

namespace {

std::string bound_text(const char* op, double bound) { return std::string(op) + " " + format_number(bound); }

}  // namespace

Criterion check_below(const std::string& name, double measured, double bound) {
  return {name, measured, bound_text("<", bound), measured < bound};
}

Criterion check_above(const std::string& name, double measured, double bound) {
  return {name, measured, bound_text(">", bound), measured > bound};
}

Criterion check_within(const std::string& name, double measured, double lo, double hi) {
  return {name, measured, "in [" + format_number(lo) + ", " + format_number(hi) + "]", measured >= lo && measured <= hi};
}

Criterion check_relative(const std::string& name, double measured, double target, double rel_tol) {
  const bool pass = std::abs(measured - target) <= rel_tol * std::abs(target);
  return {name, measured, "within " + format_number(100.0 * rel_tol) + "% of " + format_number(target), pass};
}

Criterion check_strictly_decreasing(const std::string& name, const std::vector<double>& values) {
  bool pass = values.size() >= 2;
  for (std::size_t i = 1; i < values.size(); ++i) pass = pass && values[i] < values[i - 1];
  return {name, values, "strictly decreasing", pass};
}

DiscreteKernel kernel_for(const ExperimentConfig& config) { return build_kernel(config.kernel, config.domain); }

ExperimentReport start_report(const ExperimentConfig& config) {
  ExperimentReport report;
  report.experiment = config.experiment;
  report.config_digest = config.digest();
  for (const auto& [key, value] : config.values) report.config[key] = value;
  return report;
}

double median_of(std::vector<double> xs) {
  if (xs.empty()) fail(ErrorCode::EmptySample, "median of an empty sample");
  std::sort(xs.begin(), xs.end());
  return quantile_sorted(xs, 0.5);
}

double sample_variance(const std::vector<double>& a) {
  const auto ms = mean_and_se(a);
  return ms.se * ms.se * static_cast<double>(a.size());
}

double sample_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 3) fail(ErrorCode::EmptySample, "correlation needs paired samples");
  const double ma = mean_and_se(a).mean;
  const double mb = mean_and_se(b).mean;
  std::vector<double> ab(a.size()), aa(a.size()), bb(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab[i] = (a[i] - ma) * (b[i] - mb);
    aa[i] = (a[i] - ma) * (a[i] - ma);
    bb[i] = (b[i] - mb) * (b[i] - mb);
  }
  const double denom = std::sqrt(pairwise_sum(aa) * pairwise_sum(bb));
  return denom > 0.0 ? pairwise_sum(ab) / denom : 0.0;
}

CauchyCheck compare_with_cauchy(const std::vector<double>& samples, double scale, std::size_t null_sims,
                                std::uint64_t seed) {
  CauchyCheck c;
  const CauchyLaw law{scale};
  c.ks = ks_distance(samples, [law](double x) { return cauchy_cdf(x, law); });
  c.ks_null_99 = null_sims >= 10 ? ks_null_quantile(samples.size(), 0.99, null_sims, seed) : 0.0;
  c.summary = robust_summary(samples);
  std::vector<double> grid;
  const double s = scale > 0.0 ? scale : 1.0;
  for (int k = 1; k <= 8; ++k) grid.push_back(k / (4.0 * s));
  c.ecf = ecf_fit(samples, grid);
  return c;
}

Json cauchy_json(const CauchyCheck& c, double scale, std::size_t n) {
  return Json{{"n", n},
              {"target_scale", scale},
              {"ks", c.ks},
              {"ks_null_99", c.ks_null_99},
              {"median", c.summary.median},
              {"iqr", c.summary.iqr},
              {"ecf_scale", c.ecf.scale},
              {"ecf_relative_residual", c.ecf.relative_residual},
              {"ecf_non_cauchy", c.ecf.non_cauchy}};
}

CsvTable cauchy_qq_table(std::vector<double> samples, double scale) {
  CsvTable t{{"p", "cauchy_quantile", "sample_quantile"}, {}};
  if (samples.empty()) return t;
  std::sort(samples.begin(), samples.end());
  for (int k = 1; k < 100; ++k) {
    const double p = k / 100.0;
    t.rows.push_back({p, cauchy_quantile(p, CauchyLaw{scale}), quantile_sorted(samples, p)});
  }
  return t;
}

void evaluate_time_change(const std::vector<AdjointSummary>& paths, const std::vector<double>& q_levels,
                          ExperimentReport& report, const std::string& prefix, bool as_criteria) {
  CsvTable table{{"q_lo", "q_hi", "n", "var_W", "var_X", "corr_WX"}, {}};
  for (std::size_t k = 0; k + 1 < q_levels.size(); ++k) {
    std::vector<double> dW, dX;
    for (const auto& p : paths) {
      if (!p.reached[k] || !p.reached[k + 1]) continue;
      dW.push_back(p.W_at_q[k + 1] - p.W_at_q[k]);
      dX.push_back(p.X_at_q[k + 1] - p.X_at_q[k]);
    }
    const double width = q_levels[k + 1] - q_levels[k];
    const std::string bin = prefix + "bin[" + format_number(q_levels[k]) + "," + format_number(q_levels[k + 1]) + "]";
    if (dW.size() < 3) {
      if (as_criteria) report.criteria.push_back({bin + ".var_W", Json(nullptr), "at least 3 paths reach the bin", false});
      continue;
    }
    const double var_W = sample_variance(dW);
    const double var_X = sample_variance(dX);
    const double rho = sample_correlation(dW, dX);
    if (as_criteria) {
      report.criteria.push_back(check_relative(bin + ".var_W", var_W, width, 0.10));
      report.criteria.push_back(check_below(bin + ".abs_corr_WX", std::abs(rho), 0.05));
    }
    report.diagnostics[prefix + "time_change"].push_back(Json{{"q_lo", q_levels[k]},
                                                              {"q_hi", q_levels[k + 1]},
                                                              {"n", dW.size()},
                                                              {"var_W", var_W},
                                                              {"var_X", var_X},
                                                              {"corr_WX", rho}});
    table.rows.push_back({q_levels[k], q_levels[k + 1], static_cast<double>(dW.size()), var_W, var_X, rho});
  }
  report.tables[prefix + "time_change"] = std::move(table);
}

void evaluate_fractional_moment(const std::vector<AdjointSummary>& paths, const std::vector<double>& times,
                                double mu_mass, double theta, ExperimentReport& report, const std::string& prefix) {
  CsvTable table{{"T", "m_hat", "se"}, {}};
  std::vector<double> zero(paths.size(), mu_mass);
  const auto m0 = fractional_moment(zero, theta);
  table.rows.push_back({0.0, m0.mean, m0.se});
  report.criteria.push_back({prefix + "m_hat_T0", m0.mean, "== " + format_number(std::pow(mu_mass, theta)),
                             m0.mean == std::pow(mu_mass, theta)});

  std::vector<double> means;
  std::vector<MeanSe> rungs;
  for (std::size_t t = 0; t < times.size(); ++t) {
    std::vector<double> m;
    m.reserve(paths.size());
    for (const auto& p : paths) m.push_back(p.M_at[t]);
    rungs.push_back(fractional_moment(m, theta));
    means.push_back(rungs.back().mean);
    table.rows.push_back({times[t], rungs.back().mean, rungs.back().se});
  }
  report.criteria.push_back(check_strictly_decreasing(prefix + "m_hat_decreasing", means));
  if (rungs.size() >= 2) {
    const double gap = rungs.front().mean - rungs.back().mean;
    const double se = std::sqrt(rungs.front().se * rungs.front().se + rungs.back().se * rungs.back().se);
    report.criteria.push_back(check_above(prefix + "first_last_gap_in_se", gap / se, 4.0));
  }
  report.tables[prefix + "fractional_moment"] = std::move(table);
}

}  // namespace detail

bool ExperimentReport::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass; });
}

const Criterion& ExperimentReport::criterion(const std::string& name) const {
  for (const auto& c : criteria) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no criterion named " + name);
}

Json ExperimentReport::summary_json() const {
  Json crit = Json::array();
  for (const auto& c : criteria) {
    crit.push_back(Json{{"name", c.name}, {"measured", c.measured}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  return Json{{"schema_version", std::string(kSchemaVersion)},
              {"kind", "summary"},
              {"experiment", experiment},
              {"config_digest", config_digest},
              {"config", config},
              {"criteria", crit},
              {"all_pass", all_pass()},
              {"diagnostics", diagnostics},
              {"path_count", path_records.size()}};
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
  write_json(dir / "summary.json", report.summary_json());
  write_ndjson(dir / "paths.ndjson", report.path_records);
  for (const auto& [name, table] : report.tables) write_csv(dir / (name + ".csv"), table);
  write_json(dir / "runtime.json", Json{{"schema_version", std::string(kSchemaVersion)},
                                        {"kind", "runtime"},
                                        {"config_digest", report.config_digest},
                                        {"runtime_seconds", report.runtime_seconds}});
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const auto& e = config.experiment;
  if (e == "prop15") return run_prop15(config);
  if (e == "cauchy") return run_strong_disorder_cauchy(config);
  if (e == "qv") return run_qv_consistency(config);
  if (e == "weak-probe") return run_weak_disorder_probe(config);
  if (e == "stationarity") return run_stationarity_check(config);
  if (e == "attenuated-2d") return run_2d_attenuated(config);
  if (e == "frac-moment") return run_fractional_moment(config);
  if (e == "mixed-sign-explore") return run_mixed_sign_explore(config);
  fail(ErrorCode::ConfigValidation, "unknown experiment '" + e + "'");
}

std::vector<AdjointSummary> run_adjoint_ensemble(const DiscreteKernel& kernel, const EnsembleSpec& spec,
                                                 std::size_t n_paths, std::uint64_t base_seed, unsigned workers) {
  const bool with_x = spec.params.alpha != 0.0;
  return parallel_map(
      n_paths, workers, [&kernel] { return PathWorkspace(kernel); },
      [&](PathWorkspace& ws, std::size_t i) {
        auto streams = PathNoise::for_path(base_seed, family_path_index(spec.family, i));
        const auto feed = fresh_noise(ws.sampler(), streams, spec.params.dt);
        const auto run = run_adjoint(spec.mu, spec.params, ws, spec.T_max, spec.record_every, feed);
        const auto& p = run.path;
        AdjointSummary s;
        const auto terminal = terminal_extract(p, spec.threshold);
        s.M_end = terminal.M_end;
        s.N_end = terminal.N_end;
        s.converged = terminal.converged;
        s.qv_M_inc = p.qv_M_inc.back();
        s.qv_N_inc = p.qv_N_inc.back();
        s.cross_inc = p.cross_inc.back();
        s.qv_M_formula = p.qv_M_formula ? p.qv_M_formula->back() : 0.0;
        for (double t : spec.times) s.M_at.push_back(value_at(p, p.M, t));
        if (!spec.q_levels.empty()) {
          const auto tc = time_change(p, with_x);
          for (double q : spec.q_levels) {
            const auto pt = sample_at(tc, q);
            s.reached.push_back(pt.has_value() ? 1 : 0);
            s.W_at_q.push_back(pt ? pt->W : 0.0);
            s.X_at_q.push_back(pt ? pt->X : 0.0);
          }
        }
        s.noise_clips = p.noise_clips;
        s.cell_steps = p.cell_steps;
        return s;
      });
}

Json adjoint_path_record(const AdjointSummary& s, const std::string& digest, const std::string& ensemble,
                         std::size_t index) {
  return Json{{"schema_version", std::string(kSchemaVersion)},
              {"kind", "path"},
              {"config_digest", digest},
              {"ensemble", ensemble},
              {"index", index},
              {"M_end", s.M_end},
              {"N_end", s.N_end},
              {"converged", s.converged},
              {"qv_M_inc", s.qv_M_inc},
              {"qv_N_inc", s.qv_N_inc},
              {"cross_inc", s.cross_inc},
              {"qv_M_formula", s.qv_M_formula},
              {"M_at", s.M_at},
              {"noise_clips", s.noise_clips}};
}

}  // namespace amshe
