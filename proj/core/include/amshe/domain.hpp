#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace amshe {

enum class Geometry { Torus, Line };

std::string_view geometry_name(Geometry g);
Geometry parse_geometry(std::string_view name);

using Point = std::array<double, 3>;
using CellIndex = std::array<std::size_t, 3>;

/// Periodic grid of N^d cells with side length L.
///
/// The torus places the origin at cell 0 with coordinates in [0, L); the
/// truncated line is a periodically wrapped box [-L/2, L/2) with the origin at
/// cell N/2. Flat storage is row-major with the last axis fastest.
class DomainSpec {
 public:
  static constexpr std::size_t kDefaultCellBudget = std::size_t{1} << 24;

  DomainSpec(Geometry geometry, int dimension, double side_length, std::size_t points_per_axis,
             std::size_t cell_budget = kDefaultCellBudget);

  Geometry geometry() const noexcept { return geometry_; }
  int dimension() const noexcept { return dimension_; }
  double side_length() const noexcept { return side_length_; }
  std::size_t points_per_axis() const noexcept { return points_; }
  double dx() const noexcept { return side_length_ / static_cast<double>(points_); }
  /// dx^d, the volume of one cell.
  double cell_volume() const noexcept;
  std::size_t cell_count() const noexcept { return cells_; }
  std::size_t origin_index_1d() const noexcept { return geometry_ == Geometry::Torus ? 0 : points_ / 2; }

  double coordinate(std::size_t axis_index) const noexcept;
  CellIndex unflatten(std::size_t flat) const noexcept;
  std::size_t flatten(const CellIndex& idx) const noexcept;

  /// Nearest cell to a point; coordinates wrap periodically.
  std::size_t snap(const Point& x) const;
  Point position(std::size_t flat) const noexcept;

  /// Flat index of `flat` translated by `shift` cells along every axis (periodic).
  std::size_t translate(std::size_t flat, const std::array<long, 3>& shift) const noexcept;

  /// Euclidean distance from the origin, unwrapped (used by the line weight).
  double distance_from_origin(std::size_t flat) const noexcept;

  bool operator==(const DomainSpec&) const = default;

 private:
  Geometry geometry_;
  int dimension_;
  double side_length_;
  std::size_t points_;
  std::size_t cells_;
};

/// Copy of `field` translated by `shift` cells: out(x + shift) = field(x).
std::vector<double> translate_field(const DomainSpec& domain, std::span<const double> field,
                                    const std::array<long, 3>& shift);

}  // namespace amshe
