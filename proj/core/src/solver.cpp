#include "amshe/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "amshe/errors.hpp"

namespace amshe {

std::string_view field_role_name(FieldRole role) {
  switch (role) {
    case FieldRole::MsheU: return "mshe_u";
    case FieldRole::AmsheV: return "amshe_v";
    case FieldRole::AdjointU: return "adjoint_u";
    case FieldRole::PropagatorZ: return "propagator_Z";
  }
  return "?";
}

void validate_scheme(const SchemeParams& params, const DiscreteKernel& kernel) {
  if (!(params.dt > 0.0) || !std::isfinite(params.dt)) fail(ErrorCode::InvalidArgument, "dt must be positive");
  if (!(params.alpha >= 0.0) || !std::isfinite(params.alpha)) fail(ErrorCode::InvalidArgument, "alpha must be >= 0");
  if (!(params.beta >= 0.0) || !std::isfinite(params.beta)) fail(ErrorCode::InvalidArgument, "beta must be >= 0");
  if (kernel.is_white()) {
    const double dx = kernel.domain.dx();
    if (params.dt > 0.5 * dx * dx * (1.0 + 1e-12)) {
      fail(ErrorCode::InvalidArgument,
           "white noise needs dt <= dx^2/2 (dt=" + std::to_string(params.dt) + ", dx=" + std::to_string(dx) + ")");
    }
  }
}

double default_dt(const DomainSpec& domain, const KernelSpec& kernel) {
  const double dx = domain.dx();
  if (kernel.kind == KernelKind::White) return 0.25 * dx * dx;
  return std::min(1e-3, dx);
}

std::size_t steps_for(double T, double dt) {
  if (!(T >= 0.0) || !std::isfinite(T)) fail(ErrorCode::InvalidArgument, "horizon must be finite and >= 0");
  const double ratio = T / dt;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    fail(ErrorCode::InvalidArgument,
         "horizon " + std::to_string(T) + " is not a multiple of dt=" + std::to_string(dt));
  }
  return static_cast<std::size_t>(n);
}

double MeasureSpec::total_mass() const noexcept {
  double m = 0.0;
  for (const auto& a : atoms) m += a.gamma;
  return m;
}

MeasureSpec make_measure(std::vector<Atom> atoms, bool allow_signed) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.gamma)) fail(ErrorCode::InvalidArgument, "atom weight must be finite");
    if (a.gamma < 0.0 && !allow_signed) {
      fail(ErrorCode::InvalidArgument, "atom weight " + std::to_string(a.gamma) + " is negative for an unsigned measure");
    }
  }
  return MeasureSpec{std::move(atoms), allow_signed};
}

std::vector<double> deposit(const MeasureSpec& mu, const DomainSpec& domain) {
  std::vector<double> field(domain.cell_count(), 0.0);
  const double vol = domain.cell_volume();
  for (const auto& a : mu.atoms) field[domain.snap(a.x)] += a.gamma / vol;
  return field;
}

Stepper::Stepper(const DomainSpec& domain) : grid_(domain), last_spectrum_(grid_.spectrum_size()) {}

void Stepper::heat(std::span<double> field, double dt) {
  if (field.size() != grid_.real_size()) fail(ErrorCode::InvalidArgument, "field size mismatch");
  std::copy(field.begin(), field.end(), grid_.real().begin());
  grid_.forward();
  auto spec = grid_.spectrum();
  const auto& mult = grid_.heat_multiplier(dt);
  for (std::size_t s = 0; s < spec.size(); ++s) spec[s] *= mult[s];
  std::copy(spec.begin(), spec.end(), last_spectrum_.begin());
  spectrum_current_ = true;
  grid_.backward();
  const auto out = grid_.real();
  std::copy(out.begin(), out.end(), field.begin());
}

void Stepper::mshe(FieldState& state, std::span<const double> dU, const SchemeParams& params) {
  if (state.role == FieldRole::AmsheV) fail(ErrorCode::InvalidArgument, "mshe step on an amshe_v field");
  auto& u = state.values;
  if (dU.size() != u.size()) fail(ErrorCode::InvalidArgument, "noise slice size mismatch");
  std::uint64_t clips = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double f = 1.0 + params.beta * dU[i];
    if (f < 0.0) {
      f = 0.0;
      ++clips;
    }
    u[i] *= f;
  }
  heat(u, params.dt);
  counters_.noise_clips += clips;
  counters_.cell_steps += u.size();
  state.t += params.dt;

  if (state.role == FieldRole::PropagatorZ) return;
  // The spectral heat step keeps the mean exactly but not the sign. Negative
  // ringing lobes are zeroed and the field is rescaled back to its pre-clip
  // mass, so positivity holds without leaking mass into the martingale.
  std::uint64_t ringing = 0;
  double total = 0.0;
  double kept = 0.0;
  for (double& x : u) {
    if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, "non-finite value in " + std::string(field_role_name(state.role)));
    total += x;
    if (x < 0.0) {
      x = 0.0;
      ++ringing;
    }
    kept += x;
  }
  if (ringing > 0) {
    if (total > 0.0 && kept > 0.0) {
      const double scale = total / kept;
      for (double& x : u) x *= scale;
    }
    counters_.ringing_clips += ringing;
    spectrum_current_ = false;
  }
}

void Stepper::amshe(FieldState& state, std::span<const double> dU, std::span<const double> dV,
                    const SchemeParams& params) {
  if (state.role != FieldRole::AmsheV) fail(ErrorCode::InvalidArgument, "amshe step needs an amshe_v field");
  auto& v = state.values;
  if (dU.size() != v.size()) fail(ErrorCode::InvalidArgument, "noise slice size mismatch");
  const bool additive = params.alpha != 0.0;
  if (additive && dV.size() != v.size()) fail(ErrorCode::InvalidArgument, "additive noise slice size mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] += params.beta * v[i] * dU[i];
    if (additive) v[i] += params.alpha * dV[i];
  }
  heat(v, params.dt);
  counters_.cell_steps += v.size();
  state.t += params.dt;
}

double Stepper::form_from_spectrum(std::span<const Complex> spec, const DiscreteKernel& kernel) const {
  if (!(kernel.domain == grid_.domain())) fail(ErrorCode::InvalidArgument, "kernel was built for a different domain");
  const auto& weight = grid_.hermitian_weight();
  double acc = 0.0;
  for (std::size_t s = 0; s < spec.size(); ++s) acc += weight[s] * std::norm(spec[s]) * kernel.covariance_spectrum[s];
  const double vol = grid_.domain().cell_volume();
  return acc / static_cast<double>(grid_.real_size()) * vol * vol;
}

double Stepper::covariance_form(std::span<const double> field, const DiscreteKernel& kernel) {
  if (field.size() != grid_.real_size()) fail(ErrorCode::InvalidArgument, "field size mismatch");
  std::copy(field.begin(), field.end(), grid_.real().begin());
  grid_.forward();
  return form_from_spectrum(grid_.spectrum(), kernel);
}

double Stepper::covariance_form_of_last(const DiscreteKernel& kernel) const {
  return form_from_spectrum(last_spectrum_, kernel);
}

FieldState heat_step(const FieldState& state, double dt, const DomainSpec& domain) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "dt must be positive");
  Stepper stepper(domain);
  FieldState out = state;
  stepper.heat(out.values, dt);
  out.t += dt;
  return out;
}

FieldState mshe_step(const FieldState& state, const NoiseSlice& dU, const SchemeParams& params,
                     const DomainSpec& domain) {
  Stepper stepper(domain);
  FieldState out = state;
  stepper.mshe(out, dU.field, params);
  return out;
}

FieldState amshe_step(const FieldState& state, const NoiseSlice& dU, const NoiseSlice& dV, const SchemeParams& params,
                      const DomainSpec& domain) {
  Stepper stepper(domain);
  FieldState out = state;
  stepper.amshe(out, dU.field, dV.field, params);
  return out;
}

PathWorkspace::PathWorkspace(const DiscreteKernel& kernel)
    : dU(kernel.domain.cell_count()),
      dV(kernel.domain.cell_count()),
      kernel_(&kernel),
      stepper_(kernel.domain),
      sampler_(kernel) {}

NoiseFeed fresh_noise(NoiseSampler& sampler, PathNoise& streams, double dt) {
  return [&sampler, &streams, dt](std::size_t, std::span<double> dU, std::span<double> dV) {
    sampler.sample_into(streams.u, dt, dU);
    if (!dV.empty()) sampler.sample_into(streams.v, dt, dV);
  };
}

std::vector<FieldState> run_ladder(const SchemeParams& params, PathWorkspace& ws, const std::vector<double>& horizons,
                                   double initial, FieldRole role, const NoiseFeed& feed) {
  validate_scheme(params, ws.kernel());
  if (role != FieldRole::AmsheV && role != FieldRole::MsheU) {
    fail(ErrorCode::InvalidArgument, "ladder runs support amshe_v and mshe_u fields");
  }
  if (role == FieldRole::MsheU && initial < 0.0) fail(ErrorCode::InvalidArgument, "mshe_u must start nonnegative");
  const std::size_t cells = ws.domain().cell_count();
  std::vector<std::size_t> steps;
  std::size_t total = 0;
  for (double T : horizons) {
    steps.push_back(steps_for(T, params.dt));
    total = std::max(total, steps.back());
  }

  std::vector<FieldState> fields;
  fields.reserve(horizons.size());
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    fields.push_back(FieldState{std::vector<double>(cells, initial), -horizons[k], role});
  }
  const bool need_v = role == FieldRole::AmsheV && params.alpha != 0.0;
  std::span<double> dV = need_v ? std::span<double>(ws.dV) : std::span<double>();

  for (std::size_t j = 0; j < total; ++j) {
    feed(j, ws.dU, dV);
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (j + steps[k] < total) continue;
      if (role == FieldRole::AmsheV) {
        ws.stepper().amshe(fields[k], ws.dU, dV, params);
      } else {
        ws.stepper().mshe(fields[k], ws.dU, params);
      }
    }
  }
  for (auto& f : fields) f.t = 0.0;
  return fields;
}

FieldState run_zero_start(const SchemeParams& params, PathWorkspace& ws, double T, PathNoise& streams) {
  auto feed = fresh_noise(ws.sampler(), streams, params.dt);
  return std::move(run_ladder(params, ws, {T}, 0.0, FieldRole::AmsheV, feed).front());
}

namespace {

double field_mass(std::span<const double> u, double vol) {
  double m = 0.0;
  for (double x : u) m += x;
  return m * vol;
}

double field_dot(std::span<const double> u, std::span<const double> w, double vol) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m += u[i] * w[i];
  return m * vol;
}

}  // namespace

AdjointRun run_adjoint(const MeasureSpec& mu, const SchemeParams& params, PathWorkspace& ws, double T_max,
                       std::size_t record_every, const NoiseFeed& feed, const AdjointOptions& options) {
  validate_scheme(params, ws.kernel());
  if (record_every == 0) fail(ErrorCode::InvalidArgument, "record_every must be >= 1");
  const std::size_t n = steps_for(T_max, params.dt);
  const auto& domain = ws.domain();
  const double vol = domain.cell_volume();
  const bool additive = params.alpha != 0.0;

  AdjointRun run;
  FieldState state{deposit(mu, domain), 0.0, mu.is_signed ? FieldRole::PropagatorZ : FieldRole::AdjointU};
  auto& p = run.path;
  p.mu_mass = mu.total_mass();
  p.alpha = params.alpha;
  p.beta = params.beta;
  const std::size_t records = 1 + (n + record_every - 1) / record_every;
  for (auto* series : {&p.tau, &p.M, &p.N, &p.qv_M_inc, &p.qv_N_inc, &p.cross_inc}) series->reserve(records);
  if (options.qv_formula) p.qv_M_formula.emplace().reserve(records);

  double N = 0.0, qvM = 0.0, qvN = 0.0, cross = 0.0, qvF = 0.0;
  auto record = [&](double tau, double M) {
    p.tau.push_back(tau);
    p.M.push_back(M);
    p.N.push_back(N);
    p.qv_M_inc.push_back(qvM);
    p.qv_N_inc.push_back(qvN);
    p.cross_inc.push_back(cross);
    if (options.qv_formula) p.qv_M_formula->push_back(qvF);
  };
  record(0.0, p.mu_mass);

  ws.stepper().reset_counters();
  std::span<double> dV = additive ? std::span<double>(ws.dV) : std::span<double>();
  double M_pre = field_mass(state.values, vol);
  const double qv_scale = params.beta * params.beta * params.dt;
  for (std::size_t j = 0; j < n; ++j) {
    if (options.snapshot_every != 0 && j % options.snapshot_every == 0) run.snapshots.push_back(state.values);
    if (options.qv_formula) {
      const double form = j == 0 || !ws.stepper().last_spectrum_current()
                               ? ws.stepper().covariance_form(state.values, ws.kernel())
                               : ws.stepper().covariance_form_of_last(ws.kernel());
      qvF += qv_scale * form;
    }
    feed(j, ws.dU, dV);
    const double dN = additive ? params.alpha * field_dot(state.values, dV, vol) : 0.0;
    ws.stepper().mshe(state, ws.dU, params);
    const double M_post = field_mass(state.values, vol);
    const double dM = M_post - M_pre;
    qvM += dM * dM;
    qvN += dN * dN;
    cross += dM * dN;
    N += dN;
    M_pre = M_post;
    if ((j + 1) % record_every == 0 || j + 1 == n) record(static_cast<double>(j + 1) * params.dt, M_post);
  }
  p.noise_clips = ws.stepper().counters().noise_clips;
  p.cell_steps = ws.stepper().counters().cell_steps;
  if (options.keep_final_field) run.final_field = std::move(state);
  return run;
}

MartingalePath adjoint_martingale_run(const MeasureSpec& mu, const SchemeParams& params, PathWorkspace& ws,
                                      double T_max, std::size_t record_every, PathNoise& streams) {
  auto feed = fresh_noise(ws.sampler(), streams, params.dt);
  return std::move(run_adjoint(mu, params, ws, T_max, record_every, feed).path);
}

}  // namespace amshe
