#include <algorithm>
#include <cmath>
#include <filesystem>

#include "amshe/errors.hpp"
#include "amshe/experiments.hpp"
#include "amshe/noise.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace amshe;

namespace {

// Small strong-disorder setting shared by the fast runs below.
constexpr const char* kSmallTorus =
    "domain.length = 0.5\n"
    "domain.points = 32\n"
    "kernel.kind = mollifier\n"
    "scheme.dt = 0.004\n";

ExperimentConfig config(const std::string& experiment, const std::string& extra) {
  return parse_config(std::string(kSmallTorus) + extra, experiment);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("reports are identical across worker counts") {
  const std::string body = "run.paths = 60\nrun.t_max = 4\nrun.min_converged = 0\nrun.t_ladder = 1, 2, 4\n";
  auto one = config("cauchy", body + "run.workers = 1\n");
  auto three = config("cauchy", body + "run.workers = 3\n");
  CHECK(one.digest() == three.digest());
  const auto a = run_experiment(one);
  const auto b = run_experiment(three);
  CHECK(dump_json(a.summary_json()) == dump_json(b.summary_json()));
  REQUIRE(a.path_records.size() == b.path_records.size());
  for (std::size_t i = 0; i < a.path_records.size(); ++i) CHECK(a.path_records[i] == b.path_records[i]);

  const auto dir1 = std::filesystem::temp_directory_path() / "amshe_exp_w1";
  const auto dir3 = std::filesystem::temp_directory_path() / "amshe_exp_w3";
  write_report(a, dir1);
  write_report(b, dir3);
  CHECK(read_json(dir1 / "summary.json") == read_json(dir3 / "summary.json"));
}

TEST_CASE("alpha = 0 leaves every N_end at zero") {
  const auto report =
      run_experiment(config("cauchy", "scheme.alpha = 0\nrun.paths = 20\nrun.t_max = 2\nrun.min_converged = 0\n"
                                      "run.t_ladder = 1, 2\n"));
  CHECK(report.criterion("delta.all_N_end_zero").pass);
  CHECK(report.criterion("combination.all_N_end_zero").pass);
  for (const auto& rec : report.path_records) CHECK(rec["N_end"].get<double>() == 0.0);
}

TEST_CASE("Cauchy experiment failure modes") {
  CHECK(code_of([] { run_experiment(config("cauchy", "run.paths = 10\nrun.t_max = 0.02\nrun.t_ladder = 0.01\n")); }) ==
        ErrorCode::InsufficientConvergence);
  CHECK(code_of([] {
          run_experiment(config("cauchy", "measure.atoms = 0 @ 0\nrun.paths = 5\nrun.t_max = 0.02\n"
                                          "run.t_ladder = 0.01\n"));
        }) == ErrorCode::DegenerateMeasure);
}

TEST_CASE("prop15 with a boundary start is the point mass") {
  const auto report = run_experiment(parse_config("run.paths = 200\nrun.starts = 0, 1\n", "prop15"));
  CHECK(report.criterion("a=0.all_exits_zero").pass);
  CHECK(report.criterion("a=1.ks").measured.get<double>() < 0.12);
}

TEST_CASE("fractional moments decay for two exponents") {
  for (const char* theta : {"0.5", "0.9"}) {
    const auto report = run_experiment(
        config("frac-moment", std::string("run.paths = 1000\nrun.theta = ") + theta + "\n"));
    CAPTURE(theta);
    CHECK(report.criterion("m_hat_T0").pass);
    CHECK(report.criterion("m_hat_decreasing").pass);
  }
}

TEST_CASE("QV experiment on a small torus") {
  const auto report = run_experiment(
      parse_config("kernel.kind = mollifier\nscheme.dt = 0.0005\nrun.paths = 40\nrun.t_max = 0.5\n", "qv"));
  CHECK(report.criterion("ratio_median").pass);
  CHECK(report.criterion("cross_median").pass);
  CHECK(report.criteria.size() >= 5);
}

TEST_CASE("mixed-sign exploration records quantiles without criteria") {
  const auto report = run_experiment(config("mixed-sign-explore", "run.paths = 30\nrun.t_max = 2\n"));
  CHECK(report.criteria.empty());
  CHECK(report.all_pass());
  CHECK(report.diagnostics["exploratory"] == true);
  CHECK(report.tables.count("quantiles") == 1);
}

TEST_CASE("smoke runs of the remaining experiments") {
  SUBCASE("stationarity") {
    const auto r = run_experiment(config("stationarity",
                                         "run.paths = 40\nrun.t_pair = 1, 1.2\nrun.t_ladder = 0.5, 1, 2\n"
                                         "run.ladder_paths = 10\nrun.null_perms = 50\nrun.shift = 4\n"));
    CHECK(r.criteria.size() == 3);
    CHECK(r.tables.count("ladder") == 1);
  }
  SUBCASE("weak-probe") {
    const auto r = run_experiment(parse_config("run.paths = 4\nrun.t_max = 0.4\n", "weak-probe"));
    CHECK(r.criteria.size() == 5);
  }
  SUBCASE("attenuated-2d") {
    const auto r = run_experiment(parse_config("domain.points = 64\nrun.eps_list = 0.5, 0.25\nrun.t = 0.004\n"
                                               "run.paths = 2\nrun.sample_stride = 16\nrun.subcritical_eps = 0.5\n"
                                               "run.subcritical_t = 0.004\nrun.supercritical_paths = 1\n",
                                               "attenuated-2d"));
    CHECK(r.criteria.size() == 3);
    CHECK(r.tables.count("eps_ks") == 1);
    CHECK(r.diagnostics["subcritical"]["lattice_second_moment"].get<double>() > 1.0);
  }
}

TEST_CASE("lattice second moment matches a one-step closed form and Monte Carlo") {
  KernelSpec spec;
  spec.half_width = 0.3;
  const auto k = build_kernel(spec, DomainSpec(Geometry::Torus, 2, 1.0, 16));
  const auto& d = k.domain;
  const double beta = 1.0, dt = 0.004;

  // One step: u(0) = sum_a g_a (1 + beta dU_a), so E u(0)^2 = sum_ab g_a g_b (1 + beta^2 dt R(a - b)).
  std::vector<double> g(d.cell_count(), 0.0);
  g[0] = 1.0;
  FieldState delta{g, 0.0, FieldRole::PropagatorZ};
  g = heat_step(delta, dt, d).values;
  const auto R = covariance_grid(k);
  double one_step = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    for (std::size_t b = 0; b < g.size(); ++b) {
      const auto ia = d.unflatten(a), ib = d.unflatten(b);
      const auto lag = d.translate(0, {static_cast<long>(ia[0]) - static_cast<long>(ib[0]),
                                       static_cast<long>(ia[1]) - static_cast<long>(ib[1]), 0});
      one_step += g[a] * g[b] * (1.0 + beta * beta * dt * R[lag]);
    }
  }
  CHECK(lattice_second_moment(k, beta, dt, 1) == doctest::Approx(one_step).epsilon(1e-12));
  CHECK(lattice_second_moment(k, 0.0, dt, 25) == doctest::Approx(1.0).epsilon(1e-12));

  // Many steps against Monte Carlo, pooling all cells of each run.
  const std::size_t steps = 25;
  const double exact = lattice_second_moment(k, beta, dt, steps);
  PathWorkspace ws(k);
  std::vector<double> squares;
  for (std::uint64_t i = 0; i < 4000; ++i) {
    auto streams = PathNoise::for_path(9, i);
    const auto u = run_ladder(SchemeParams{dt, 0.0, beta}, ws, {dt * steps}, 1.0, FieldRole::MsheU,
                              fresh_noise(ws.sampler(), streams, dt))
                       .front();
    squares.push_back(u.values[d.flatten({static_cast<std::size_t>(i % 16), 5, 0})] *
                      u.values[d.flatten({static_cast<std::size_t>(i % 16), 5, 0})]);
  }
  const auto m = testing::moments(squares);
  CHECK(std::abs(m.mean - exact) < 4.0 * m.se);
  CHECK(exact > 1.0);
}
