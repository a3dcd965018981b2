#include "amshe/martingale.hpp"

#include <algorithm>
#include <string>

#include "amshe/errors.hpp"

namespace amshe {

QvSeries qv_increments(const MartingalePath& path) {
  const std::size_t n = path.size();
  if (n < 2) fail(ErrorCode::InvalidArgument, "qv needs at least two samples");
  if (path.M.size() != n || path.N.size() != n) fail(ErrorCode::InvalidArgument, "ragged path record");
  QvSeries out;
  out.qv_M.assign(n, 0.0);
  out.qv_N.assign(n, 0.0);
  out.cross.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double dM = path.M[i] - path.M[i - 1];
    const double dN = path.N[i] - path.N[i - 1];
    out.qv_M[i] = out.qv_M[i - 1] + dM * dM;
    out.qv_N[i] = out.qv_N[i - 1] + dN * dN;
    out.cross[i] = out.cross[i - 1] + dM * dN;
  }
  return out;
}

std::vector<double> qv_formula(const std::vector<double>& forms, double beta, double dt) {
  std::vector<double> out(forms.size() + 1, 0.0);
  const double scale = beta * beta * dt;
  for (std::size_t i = 0; i < forms.size(); ++i) out[i + 1] = out[i] + scale * forms[i];
  return out;
}

TimeChangedPath time_change(const MartingalePath& path, bool with_x) {
  if (path.qv_M_inc.size() != path.size() || path.size() == 0) {
    fail(ErrorCode::InvalidArgument, "time change needs the recorded [M] series");
  }
  if (with_x && path.alpha == 0.0) fail(ErrorCode::DegenerateAlpha, "X = (beta/alpha) N is undefined for alpha = 0");
  TimeChangedPath out;
  out.q = path.qv_M_inc;
  out.W = path.M;
  if (with_x) {
    const double r = path.beta / path.alpha;
    out.X.reserve(path.size());
    for (double n : path.N) out.X.push_back(r * n);
  }
  return out;
}

std::optional<TimeChangedPoint> sample_at(const TimeChangedPath& path, double q) {
  const auto it = std::lower_bound(path.q.begin(), path.q.end(), q);
  if (it == path.q.end()) return std::nullopt;
  const auto i = static_cast<std::size_t>(it - path.q.begin());
  const bool has_x = !path.X.empty();
  if (i == 0 || *it == q) return TimeChangedPoint{path.W[i], has_x ? path.X[i] : 0.0};
  const double q0 = path.q[i - 1];
  const double w = (q - q0) / (path.q[i] - q0);
  const double W = path.W[i - 1] + w * (path.W[i] - path.W[i - 1]);
  const double X = has_x ? path.X[i - 1] + w * (path.X[i] - path.X[i - 1]) : 0.0;
  return TimeChangedPoint{W, X};
}

TerminalValues terminal_extract(const MartingalePath& path, double threshold) {
  if (path.size() == 0) fail(ErrorCode::InvalidArgument, "empty path");
  const double M_end = path.M.back();
  return {M_end, path.N.back(), M_end < threshold};
}

double value_at(const MartingalePath& path, const std::vector<double>& series, double tau) {
  if (series.size() != path.size() || series.empty()) fail(ErrorCode::InvalidArgument, "series does not match the path");
  const auto it = std::upper_bound(path.tau.begin(), path.tau.end(), tau + 1e-9 * std::max(1.0, tau));
  if (it == path.tau.begin()) fail(ErrorCode::InvalidArgument, "time " + std::to_string(tau) + " precedes the record");
  return series[static_cast<std::size_t>(it - path.tau.begin()) - 1];
}

}  // namespace amshe
