#include <algorithm>
#include <cmath>

#include "amshe/errors.hpp"
#include "amshe/parallel.hpp"
#include "experiments_internal.hpp"

namespace amshe {

namespace {

constexpr double kCriticalBeta = 2.5066282746310002;  // sqrt(2 pi)

struct Level {
  DiscreteKernel kernel;
  SchemeParams params;
  std::size_t steps = 0;
};

/// Attenuated couplings on the eps-rescaled kernel, with dt a whole fraction of
/// t no larger than dt_scale (eps h)^2.
Level make_level(const DiscreteKernel& base, double eps, double alpha, double beta, double t, double dt_scale,
                 const DomainSpec& domain) {
  Level level{rescale_kernel(base, eps, domain), {}, 0};
  const double width = level.kernel.spec.effective_half_width();
  level.steps = static_cast<std::size_t>(std::ceil(t / (dt_scale * width * width) - 1e-9));
  const double attenuation = std::sqrt(std::log(1.0 / eps));
  level.params = SchemeParams{t / static_cast<double>(level.steps), alpha / attenuation, beta / attenuation};
  return level;
}

/// Flat indices of the grid sites (i, j) * stride shifted so the first lands on `anchor`.
std::vector<std::size_t> sample_sites(const DomainSpec& domain, std::size_t anchor, std::size_t stride) {
  std::vector<std::size_t> sites;
  const std::size_t n = domain.points_per_axis();
  for (std::size_t i = 0; i < n; i += stride) {
    for (std::size_t j = 0; j < n; j += stride) {
      sites.push_back(domain.translate(anchor, {static_cast<long>(i), static_cast<long>(j), 0}));
    }
  }
  return sites;
}

/// Per-run samples of sum_i gamma_i f(x_i + offset) over the stride offsets.
std::vector<double> combination_samples(const std::vector<double>& field, const DomainSpec& domain,
                                        const MeasureSpec& mu, std::size_t stride) {
  const std::size_t n = domain.points_per_axis();
  std::vector<double> out;
  for (std::size_t i = 0; i < n; i += stride) {
    for (std::size_t j = 0; j < n; j += stride) {
      double s = 0.0;
      for (const auto& atom : mu.atoms) {
        const auto cell = domain.translate(domain.snap(atom.x), {static_cast<long>(i), static_cast<long>(j), 0});
        s += atom.gamma * field[cell];
      }
      out.push_back(s);
    }
  }
  return out;
}

std::vector<double> flatten(const std::vector<std::vector<double>>& parts) {
  std::vector<double> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

double lattice_second_moment(const DiscreteKernel& kernel, double beta, double dt, std::size_t steps) {
  const auto& domain = kernel.domain;
  const auto R = covariance_grid(kernel);
  SpectralGrid grid(domain);
  std::vector<double> C(domain.cell_count(), 1.0);
  std::vector<double> damp = grid.heat_multiplier(dt);
  for (auto& m : damp) m *= m;
  for (std::size_t n = 0; n < steps; ++n) {
    auto real = grid.real();
    for (std::size_t i = 0; i < C.size(); ++i) real[i] = C[i] * (1.0 + beta * beta * dt * R[i]);
    grid.forward();
    auto spec = grid.spectrum();
    for (std::size_t s = 0; s < spec.size(); ++s) spec[s] *= damp[s];
    grid.backward();
    std::copy(grid.real().begin(), grid.real().end(), C.begin());
  }
  return C[0];
}

ExperimentReport run_2d_attenuated(const ExperimentConfig& config) {
  detail::Stopwatch clock;
  auto report = detail::start_report(config);
  const auto& domain = config.domain;
  const auto base = detail::kernel_for(config);
  const auto eps_list = config.numbers("run.eps_list");
  const double t = config.number("run.t");
  const double dt_scale = config.number("run.dt_scale");
  const auto stride = static_cast<std::size_t>(config.integer("run.sample_stride"));
  if (stride == 0 || domain.points_per_axis() % stride != 0) {
    fail(ErrorCode::ConfigValidation, "run.sample_stride must divide domain.points");
  }
  const double alpha = config.scheme.alpha;
  const double beta = config.scheme.beta;
  if (std::abs(config.measure.total_mass() - 1.0) > 1e-12) {
    fail(ErrorCode::ConfigValidation, "measure.atoms weights must sum to 1");
  }
  const std::size_t origin = domain.snap(Point{0.0, 0.0, 0.0});

  auto levels_for = [&](double eps, double a, double b, double horizon) {
    return make_level(base, eps, a, b, horizon, dt_scale, domain);
  };

  // Additive branch: the combination of v at the atoms, zero start, one ensemble per eps.
  if (beta >= kCriticalBeta * (1.0 - 1e-12) && alpha > 0.0) {
    const double target = alpha / beta;
    CsvTable table{{"eps", "dt", "steps", "n", "ks", "median", "iqr"}, {}};
    std::vector<double> ks;
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
      const auto level = levels_for(eps_list[e], alpha, beta, t);
      const auto parts = parallel_map(
          config.n_paths, config.workers, [&level] { return PathWorkspace(level.kernel); },
          [&](PathWorkspace& ws, std::size_t i) {
            auto streams = PathNoise::for_path(config.base_seed, family_path_index(e, i));
            const auto v = run_zero_start(level.params, ws, t, streams);
            return combination_samples(v.values, domain, config.measure, stride);
          });
      auto samples = flatten(parts);
      const double d = ks_distance(samples, [target](double x) { return cauchy_cdf(x, CauchyLaw{target}); });
      const auto summary = robust_summary(samples);
      ks.push_back(d);
      table.rows.push_back({eps_list[e], level.params.dt, static_cast<double>(level.steps),
                            static_cast<double>(samples.size()), d, summary.median, summary.iqr});
      report.tables["qq_eps" + format_number(eps_list[e])] = detail::cauchy_qq_table(std::move(samples), target);
    }
    report.criteria.push_back(detail::check_strictly_decreasing("supercritical.ks_trend", ks));
    report.diagnostics["supercritical.target_scale"] = target;
    report.tables["eps_ks"] = std::move(table);
  }

  // Multiplicative control below the critical coupling: u from 1, alpha = 0.
  {
    const double beta_sub = config.number("run.subcritical_beta");
    const double eps_sub = config.number("run.subcritical_eps");
    const double t_sub = config.number("run.subcritical_t");
    const auto level = levels_for(eps_sub, 0.0, beta_sub, t_sub);
    const auto sites = sample_sites(domain, origin, stride);
    const auto parts = parallel_map(
        config.n_paths, config.workers, [&level] { return PathWorkspace(level.kernel); },
        [&](PathWorkspace& ws, std::size_t i) {
          auto streams = PathNoise::for_path(config.base_seed, family_path_index(eps_list.size(), i));
          const auto feed = fresh_noise(ws.sampler(), streams, level.params.dt);
          const auto u = run_ladder(level.params, ws, {t_sub}, 1.0, FieldRole::MsheU, feed).front();
          std::vector<double> s;
          for (auto c : sites) s.push_back(u.values[c]);
          return s;
        });
    const auto samples = flatten(parts);
    const auto check = lognormal_subcritical_check(samples, beta_sub, config.number("run.trim"));
    const double exact = lattice_second_moment(level.kernel, level.params.beta, level.params.dt, level.steps);
    report.criteria.push_back(detail::check_relative("subcritical.trimmed_second_moment", check.second_moment_trimmed,
                                                     check.target_second_moment, 0.10));
    report.diagnostics["subcritical"] = Json{{"beta", beta_sub},
                                             {"eps", eps_sub},
                                             {"t", t_sub},
                                             {"dt", level.params.dt},
                                             {"n", check.n},
                                             {"second_moment", check.second_moment},
                                             {"second_moment_trimmed", check.second_moment_trimmed},
                                             {"lattice_second_moment", exact},
                                             {"target", check.target_second_moment},
                                             {"log_mean", check.log_mean},
                                             {"log_variance", check.log_variance},
                                             {"sigma2", check.sigma2}};
  }

  // Multiplicative run above the critical coupling: the typical size of u shrinks as eps decreases.
  const auto super_paths = static_cast<std::size_t>(config.integer("run.supercritical_paths"));
  if (super_paths > 0) {
    const double beta_sup = config.number("run.supercritical_beta");
    const auto sites = sample_sites(domain, origin, stride);
    CsvTable table{{"eps", "median_abs_u"}, {}};
    std::vector<double> medians;
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
      const auto level = levels_for(eps_list[e], 0.0, beta_sup, t);
      const auto parts = parallel_map(
          super_paths, config.workers, [&level] { return PathWorkspace(level.kernel); },
          [&](PathWorkspace& ws, std::size_t i) {
            auto streams = PathNoise::for_path(config.base_seed, family_path_index(eps_list.size() + 1 + e, i));
            const auto feed = fresh_noise(ws.sampler(), streams, level.params.dt);
            const auto u = run_ladder(level.params, ws, {t}, 1.0, FieldRole::MsheU, feed).front();
            std::vector<double> s;
            for (auto c : sites) s.push_back(std::abs(u.values[c]));
            return s;
          });
      medians.push_back(detail::median_of(flatten(parts)));
      table.rows.push_back({eps_list[e], medians.back()});
    }
    report.criteria.push_back(detail::check_strictly_decreasing("supercritical_mshe.median_abs_u", medians));
    report.tables["eps_median_u"] = std::move(table);
  }

  report.runtime_seconds = clock.seconds();
  return report;
}

}  // namespace amshe
