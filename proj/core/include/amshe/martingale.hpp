#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace amshe {

/// Recorded (M, N) trajectory of one adjoint run.
///
/// The qv series are running sums taken at step resolution and sampled on
/// tau, so they do not depend on record_every.
struct MartingalePath {
  std::vector<double> tau;
  std::vector<double> M;
  std::vector<double> N;
  std::vector<double> qv_M_inc;
  std::vector<double> qv_N_inc;
  std::vector<double> cross_inc;
  std::optional<std::vector<double>> qv_M_formula;
  double mu_mass = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t noise_clips = 0;
  std::uint64_t cell_steps = 0;

  std::size_t size() const noexcept { return tau.size(); }
};

struct QvSeries {
  std::vector<double> qv_M;
  std::vector<double> qv_N;
  std::vector<double> cross;
};

/// Running sums of squared and cross increments of the recorded M and N samples.
QvSeries qv_increments(const MartingalePath& path);

/// beta^2 dt sum_tau Q(u_tau) for a stored trajectory, Q(u) = sum sum u u R dx^2d
/// given per-step. Output has one more entry than `forms` and starts at 0.
std::vector<double> qv_formula(const std::vector<double>& forms, double beta, double dt);

struct TimeChangedPath {
  std::vector<double> q;
  std::vector<double> W;
  std::vector<double> X;
};

/// (M, (beta/alpha) N) indexed by q = [M]. X is omitted when `with_x` is false.
TimeChangedPath time_change(const MartingalePath& path, bool with_x = true);

/// Linear interpolation of W and X at level q; nullopt when the path never reaches q.
struct TimeChangedPoint {
  double W;
  double X;
};
std::optional<TimeChangedPoint> sample_at(const TimeChangedPath& path, double q);

struct TerminalValues {
  double M_end;
  double N_end;
  bool converged;
};

TerminalValues terminal_extract(const MartingalePath& path, double threshold);

/// Value of a recorded series at time tau (nearest recorded sample at or before tau).
double value_at(const MartingalePath& path, const std::vector<double>& series, double tau);

}  // namespace amshe
