#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "amshe/domain.hpp"
#include "amshe/kernel.hpp"
#include "amshe/martingale.hpp"
#include "amshe/noise.hpp"
#include "amshe/seeds.hpp"
#include "amshe/spectral.hpp"

namespace amshe {

enum class FieldRole { MsheU, AmsheV, AdjointU, PropagatorZ };

std::string_view field_role_name(FieldRole role);

struct FieldState {
  std::vector<double> values;
  double t = 0.0;
  FieldRole role = FieldRole::MsheU;
};

struct SchemeParams {
  double dt = 1e-3;
  double alpha = 0.0;
  double beta = 1.0;
};

/// Rejects dt <= 0, negative couplings, and white noise stepped coarser than dx^2/2.
void validate_scheme(const SchemeParams& params, const DiscreteKernel& kernel);

/// dx^2/4 for the white kernel, min(1e-3, dx) for mollified noise.
double default_dt(const DomainSpec& domain, const KernelSpec& kernel);

/// Number of whole steps of size dt in a horizon T; fails unless T is a multiple of dt.
std::size_t steps_for(double T, double dt);

struct Atom {
  double gamma = 1.0;
  Point x{0.0, 0.0, 0.0};
};

struct MeasureSpec {
  std::vector<Atom> atoms;
  /// Set only by the exploratory mixed-sign experiment.
  bool is_signed = false;

  double total_mass() const noexcept;
};

/// Validates the weights (nonnegative unless `allow_signed`) and builds the measure.
MeasureSpec make_measure(std::vector<Atom> atoms, bool allow_signed = false);

/// Atoms snapped to their nearest cell with density gamma / dx^d.
std::vector<double> deposit(const MeasureSpec& mu, const DomainSpec& domain);

struct StepCounters {
  /// Cells whose factor 1 + beta dU fell below zero.
  std::uint64_t noise_clips = 0;
  /// Cells left negative by the spectral heat step (Gibbs ringing), reset to
  /// zero with the field rescaled to its pre-clip mass.
  std::uint64_t ringing_clips = 0;
  std::uint64_t cell_steps = 0;

  double clip_fraction() const noexcept {
    return cell_steps == 0 ? 0.0 : static_cast<double>(noise_clips) / static_cast<double>(cell_steps);
  }
};

/// Exponential-Euler stepper on one domain. Reuses its FFT workspace across
/// calls; one instance per worker.
class Stepper {
 public:
  explicit Stepper(const DomainSpec& domain);

  const DomainSpec& domain() const noexcept { return grid_.domain(); }
  const StepCounters& counters() const noexcept { return counters_; }
  void reset_counters() noexcept { counters_ = {}; }

  /// In place exp(dt Laplacian / 2). The filtered spectrum is retained.
  void heat(std::span<double> field, double dt);

  /// u <- heat(u * max(0, 1 + beta dU)), then ringing clip with mass restored.
  void mshe(FieldState& state, std::span<const double> dU, const SchemeParams& params);

  /// v <- heat(v + beta v dU + alpha dV).
  void amshe(FieldState& state, std::span<const double> dU, std::span<const double> dV, const SchemeParams& params);

  /// sum_x sum_y f(x) f(y) R(x - y) dx^2d, from a fresh transform of f.
  double covariance_form(std::span<const double> field, const DiscreteKernel& kernel);

  /// Same form evaluated on the spectrum kept by the latest heat() call.
  double covariance_form_of_last(const DiscreteKernel& kernel) const;
  /// False when a ringing clip changed the field after the latest heat() call.
  bool last_spectrum_current() const noexcept { return spectrum_current_; }

 private:
  double form_from_spectrum(std::span<const Complex> spec, const DiscreteKernel& kernel) const;

  SpectralGrid grid_;
  std::vector<Complex> last_spectrum_;
  bool spectrum_current_ = false;
  StepCounters counters_;
};

FieldState heat_step(const FieldState& state, double dt, const DomainSpec& domain);
FieldState mshe_step(const FieldState& state, const NoiseSlice& dU, const SchemeParams& params,
                     const DomainSpec& domain);
FieldState amshe_step(const FieldState& state, const NoiseSlice& dU, const NoiseSlice& dV, const SchemeParams& params,
                      const DomainSpec& domain);

/// Independent U and V streams of one sample path.
struct PathNoise {
  Rng u;
  Rng v;

  static PathNoise for_path(std::uint64_t base_seed, std::uint64_t path_index) {
    return {make_rng(base_seed, path_index, StreamTag::U), make_rng(base_seed, path_index, StreamTag::V)};
  }
};

/// Per-worker scratch: stepper, noise sampler and increment buffers.
class PathWorkspace {
 public:
  explicit PathWorkspace(const DiscreteKernel& kernel);

  const DiscreteKernel& kernel() const noexcept { return *kernel_; }
  const DomainSpec& domain() const noexcept { return kernel_->domain; }
  Stepper& stepper() noexcept { return stepper_; }
  NoiseSampler& sampler() noexcept { return sampler_; }

  std::vector<double> dU;
  std::vector<double> dV;

 private:
  const DiscreteKernel* kernel_;
  Stepper stepper_;
  NoiseSampler sampler_;
};

/// Fills dU (and dV when it is non-empty) with the increments of step `step`.
using NoiseFeed = std::function<void(std::size_t step, std::span<double> dU, std::span<double> dV)>;

NoiseFeed fresh_noise(NoiseSampler& sampler, PathNoise& streams, double dt);

/// Zero-start AMSHE field at time 0 after running from time -T.
FieldState run_zero_start(const SchemeParams& params, PathWorkspace& ws, double T, PathNoise& streams);

/// Fields started at times -T_k (all from `initial`) and driven by one shared
/// noise history on [-max T_k, 0]. AmsheV uses the AMSHE step, MsheU the MSHE step.
std::vector<FieldState> run_ladder(const SchemeParams& params, PathWorkspace& ws, const std::vector<double>& horizons,
                                   double initial, FieldRole role, const NoiseFeed& feed);

struct AdjointOptions {
  /// Accumulate beta^2 dt sum sum u u R alongside the increments.
  bool qv_formula = true;
  bool keep_final_field = false;
  /// Store the pre-step field every this many steps (0 disables).
  std::size_t snapshot_every = 0;
};

struct AdjointRun {
  MartingalePath path;
  FieldState final_field;
  std::vector<std::vector<double>> snapshots;
};

/// One forward run of the adjoint field from mu, producing (M, N) and their QV series.
AdjointRun run_adjoint(const MeasureSpec& mu, const SchemeParams& params, PathWorkspace& ws, double T_max,
                       std::size_t record_every, const NoiseFeed& feed, const AdjointOptions& options = {});

MartingalePath adjoint_martingale_run(const MeasureSpec& mu, const SchemeParams& params, PathWorkspace& ws,
                                      double T_max, std::size_t record_every, PathNoise& streams);

}  // namespace amshe
