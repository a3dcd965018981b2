#include <algorithm>
#include <cmath>
#include <limits>

#include "amshe/errors.hpp"
#include "amshe/frozen_noise.hpp"
#include "amshe/martingale.hpp"
#include "amshe/solver.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace amshe;

namespace {

MartingalePath toy_path() {
  MartingalePath p;
  p.tau = {0.0, 0.1, 0.2, 0.3};
  p.M = {1.0, 1.5, 0.5, 0.25};
  p.N = {0.0, -1.0, 1.0, 1.0};
  p.qv_M_inc = {0.0, 0.25, 1.25, 1.3125};
  p.qv_N_inc = {0.0, 1.0, 5.0, 5.0};
  p.cross_inc = {0.0, -0.5, -2.5, -2.5};
  p.mu_mass = 1.0;
  p.alpha = 2.0;
  p.beta = 1.0;
  return p;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

TEST_CASE("increment quadratic variation") {
  const auto qv = qv_increments(toy_path());
  CHECK(qv.qv_M == std::vector<double>{0.0, 0.25, 1.25, 1.3125});
  CHECK(qv.qv_N == std::vector<double>{0.0, 1.0, 5.0, 5.0});
  CHECK(qv.cross == std::vector<double>{0.0, -0.5, -2.5, -2.5});

  auto flat = toy_path();
  flat.M.assign(4, 2.0);
  const auto q0 = qv_increments(flat);
  CHECK(std::all_of(q0.qv_M.begin(), q0.qv_M.end(), [](double x) { return x == 0.0; }));

  MartingalePath single;
  single.tau = {0.0};
  single.M = {1.0};
  single.N = {0.0};
  CHECK_THROWS_AS(qv_increments(single), Error);
}

TEST_CASE("integral quadratic variation") {
  const std::vector<double> forms{0.0, 0.0, 0.0};
  const auto zero = qv_formula(forms, 1.0, 0.1);
  CHECK(zero == std::vector<double>{0.0, 0.0, 0.0, 0.0});

  const std::vector<double> some{1.0, 2.0, 0.5};
  const auto a = qv_formula(some, 1.5, 0.1);
  const auto b = qv_formula(some, 3.0, 0.1);
  REQUIRE(a.size() == 4);
  CHECK(a[3] == doctest::Approx(1.5 * 1.5 * 0.1 * 3.5));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(4.0 * a[i]).epsilon(1e-15));
}

TEST_CASE("the running integral form matches qv_formula over stored snapshots") {
  const auto k = testing::kernel_1d(1.0, 32, 0.15);
  const double dt = 5e-3;
  const auto noise = generate_frozen_noise(k, dt, 0.0, 100, 12);
  PathWorkspace ws(k);
  AdjointOptions opts;
  opts.snapshot_every = 1;
  const auto run =
      run_adjoint(make_measure({{1.0, {0.5, 0.0, 0.0}}}), SchemeParams{dt, 0.0, 1.2}, ws, 0.5, 1, frozen_feed(noise, 0), opts);
  // Independent evaluation of sum sum u u R dx^2 on each snapshot, by direct convolution.
  const auto R = covariance_grid(k);
  const double dx = k.domain.dx();
  std::vector<double> forms;
  for (const auto& u : run.snapshots) {
    double f = 0.0;
    for (std::size_t a = 0; a < 32; ++a) {
      for (std::size_t b = 0; b < 32; ++b) f += u[a] * u[b] * R[(a + 32 - b) % 32];
    }
    forms.push_back(f * dx * dx);
  }
  const auto series = qv_formula(forms, 1.2, dt);
  REQUIRE(run.path.qv_M_formula.has_value());
  const auto& recorded = *run.path.qv_M_formula;
  REQUIRE(recorded.size() == series.size());
  for (std::size_t i = 0; i < series.size(); ++i) CHECK(recorded[i] == doctest::Approx(series[i]).epsilon(1e-10));
}

TEST_CASE("QV identities on adjoint runs") {
  // [N] = (alpha/beta)^2 [M], [M, N] = 0, and the two [M] estimators agree.
  const auto k = testing::kernel_1d(1.0, 64, 0.1);
  PathWorkspace ws(k);
  const double alpha = 2.0, beta = 1.0;
  const SchemeParams p{1e-3, alpha, beta};
  const auto mu = make_measure({{1.0, {0.0, 0.0, 0.0}}});
  std::vector<double> ratio, cross, disagreement;
  for (std::uint64_t i = 0; i < 30; ++i) {
    auto streams = PathNoise::for_path(55, i);
    const auto path = adjoint_martingale_run(mu, p, ws, 2.0, 1, streams);
    const double qm = path.qv_M_inc.back();
    const double qn = path.qv_N_inc.back();
    ratio.push_back(qn / qm);
    cross.push_back(std::abs(path.cross_inc.back()) / std::sqrt(qm * qn));
    disagreement.push_back(std::abs(path.qv_M_formula->back() - qm) / qm);
    CHECK(std::is_sorted(path.qv_M_inc.begin(), path.qv_M_inc.end()));
    CHECK(std::is_sorted(path.qv_N_inc.begin(), path.qv_N_inc.end()));
  }
  CHECK(median(ratio) == doctest::Approx(4.0).epsilon(0.05));
  CHECK(median(cross) < 0.05);
  CHECK(median(disagreement) < 0.05);
}

TEST_CASE("time change") {
  const auto path = toy_path();
  const auto tc = time_change(path);
  CHECK(std::is_sorted(tc.q.begin(), tc.q.end()));
  CHECK(tc.W.front() == path.mu_mass);
  CHECK(tc.X.front() == 0.0);
  CHECK(tc.X[1] == -0.5);

  const auto mid = sample_at(tc, 0.75);
  REQUIRE(mid.has_value());
  CHECK(mid->W == doctest::Approx(1.0));
  CHECK(mid->X == doctest::Approx(0.0));
  CHECK(sample_at(tc, 0.25)->W == 1.5);
  CHECK_FALSE(sample_at(tc, 2.0).has_value());

  auto no_alpha = path;
  no_alpha.alpha = 0.0;
  try {
    time_change(no_alpha);
    FAIL("expected DegenerateAlpha");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateAlpha);
  }
  CHECK(time_change(no_alpha, false).X.empty());
}

TEST_CASE("terminal extraction") {
  const auto path = toy_path();
  const auto t = terminal_extract(path, 1e-3);
  CHECK(t.M_end == 0.25);
  CHECK(t.N_end == 1.0);
  CHECK_FALSE(t.converged);
  CHECK(terminal_extract(path, std::numeric_limits<double>::infinity()).converged);
  CHECK(value_at(path, path.M, 0.2) == 0.5);
  CHECK(value_at(path, path.M, 0.25) == 0.5);
  CHECK(value_at(path, path.M, 10.0) == 0.25);

  const auto k = testing::kernel_1d(1.0, 32, 0.15);
  PathWorkspace ws(k);
  auto streams = PathNoise::for_path(3, 3);
  const auto run = adjoint_martingale_run(make_measure({{1.0, {0.0, 0.0, 0.0}}}), SchemeParams{5e-3, 0.0, 1.0}, ws,
                                          0.5, 5, streams);
  CHECK(terminal_extract(run, 1e-3).N_end == 0.0);
}

TEST_CASE("M is nonnegative and linear over positive combinations") {
  const auto k = testing::kernel_1d(1.0, 32, 0.15);
  const auto noise = generate_frozen_noise(k, 5e-3, 0.0, 400, 13);
  PathWorkspace ws(k);
  const SchemeParams p{5e-3, 0.0, 1.5};
  std::vector<MartingalePath> parts;
  const std::vector<double> gamma{0.2, 0.5, 1.3};
  const std::vector<double> xs{0.0, 0.3, 0.8};
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < 3; ++i) {
    parts.push_back(run_adjoint(make_measure({{1.0, {xs[i], 0.0, 0.0}}}), p, ws, 2.0, 20, frozen_feed(noise, 0)).path);
    atoms.push_back({gamma[i], {xs[i], 0.0, 0.0}});
  }
  const auto all = run_adjoint(make_measure(atoms), p, ws, 2.0, 20, frozen_feed(noise, 0)).path;
  for (std::size_t r = 0; r < all.size(); ++r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) sum += gamma[i] * parts[i].M[r];
    CHECK(all.M[r] >= 0.0);
    CHECK(all.M[r] == doctest::Approx(sum).epsilon(1e-9));
  }
}
