#include "amshe/domain.hpp"

#include <cmath>
#include <string>

#include "amshe/errors.hpp"

namespace amshe {

std::string_view geometry_name(Geometry g) { return g == Geometry::Torus ? "torus" : "line"; }

Geometry parse_geometry(std::string_view name) {
  if (name == "torus") return Geometry::Torus;
  if (name == "line" || name == "truncated-line") return Geometry::Line;
  fail(ErrorCode::InvalidArgument, "unknown geometry '" + std::string(name) + "'");
}

DomainSpec::DomainSpec(Geometry geometry, int dimension, double side_length,
                       std::size_t points_per_axis, std::size_t cell_budget)
    : geometry_(geometry), dimension_(dimension), side_length_(side_length), points_(points_per_axis) {
  if (dimension < 1 || dimension > 3) {
    fail(ErrorCode::InvalidArgument, "dimension must be 1, 2 or 3");
  }
  if (!(side_length > 0.0) || !std::isfinite(side_length)) {
    fail(ErrorCode::InvalidArgument, "side length must be positive");
  }
  if (points_per_axis < 8) {
    fail(ErrorCode::InvalidArgument, "need at least 8 points per axis");
  }
  cells_ = 1;
  for (int a = 0; a < dimension; ++a) {
    if (cells_ > cell_budget / points_per_axis) {
      fail(ErrorCode::DomainTooLarge, "N^d = " + std::to_string(points_per_axis) + "^" +
                                          std::to_string(dimension) + " exceeds the cell budget " +
                                          std::to_string(cell_budget));
    }
    cells_ *= points_per_axis;
  }
}

double DomainSpec::cell_volume() const noexcept { return std::pow(dx(), dimension_); }

double DomainSpec::coordinate(std::size_t axis_index) const noexcept {
  return (static_cast<double>(axis_index) - static_cast<double>(origin_index_1d())) * dx();
}

CellIndex DomainSpec::unflatten(std::size_t flat) const noexcept {
  CellIndex idx{0, 0, 0};
  for (int a = dimension_ - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = flat % points_;
    flat /= points_;
  }
  return idx;
}

std::size_t DomainSpec::flatten(const CellIndex& idx) const noexcept {
  std::size_t flat = 0;
  for (int a = 0; a < dimension_; ++a) flat = flat * points_ + idx[static_cast<std::size_t>(a)];
  return flat;
}

std::size_t DomainSpec::snap(const Point& x) const {
  CellIndex idx{0, 0, 0};
  const auto n = static_cast<long long>(points_);
  for (int a = 0; a < dimension_; ++a) {
    const double c = x[static_cast<std::size_t>(a)];
    if (!std::isfinite(c)) fail(ErrorCode::InvalidArgument, "non-finite coordinate");
    long long i = std::llround(c / dx()) + static_cast<long long>(origin_index_1d());
    i %= n;
    if (i < 0) i += n;
    idx[static_cast<std::size_t>(a)] = static_cast<std::size_t>(i);
  }
  return flatten(idx);
}

Point DomainSpec::position(std::size_t flat) const noexcept {
  const auto idx = unflatten(flat);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dimension_; ++a) p[static_cast<std::size_t>(a)] = coordinate(idx[static_cast<std::size_t>(a)]);
  return p;
}

std::size_t DomainSpec::translate(std::size_t flat, const std::array<long, 3>& shift) const noexcept {
  auto idx = unflatten(flat);
  const auto n = static_cast<long>(points_);
  for (int a = 0; a < dimension_; ++a) {
    const auto k = static_cast<std::size_t>(a);
    long v = (static_cast<long>(idx[k]) + shift[k]) % n;
    if (v < 0) v += n;
    idx[k] = static_cast<std::size_t>(v);
  }
  return flatten(idx);
}

double DomainSpec::distance_from_origin(std::size_t flat) const noexcept {
  const Point p = position(flat);
  double r2 = 0.0;
  for (int a = 0; a < dimension_; ++a) r2 += p[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(a)];
  return std::sqrt(r2);
}

std::vector<double> translate_field(const DomainSpec& domain, std::span<const double> field,
                                    const std::array<long, 3>& shift) {
  if (field.size() != domain.cell_count()) {
    fail(ErrorCode::InvalidArgument, "field size does not match domain");
  }
  std::vector<double> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) out[domain.translate(i, shift)] = field[i];
  return out;
}

}  // namespace amshe
