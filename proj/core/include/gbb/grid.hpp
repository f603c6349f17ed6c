#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gbb {

enum class GridKind { Uniform, Geometric };

const char* to_string(GridKind kind) noexcept;
GridKind parse_grid_kind(const std::string& name);

/// Strictly increasing discretization of [0, 1 - eps_min].
///
/// Uniform grids space nodes evenly; geometric grids keep a constant ratio
/// eps_min^(1/n) between successive distances to the singular endpoint t = 1.
class TimeGrid {
public:
  /// Accepts any 0 < eps_min < 1; make_grid applies the stricter experiment bound.
  TimeGrid(GridKind kind, std::size_t n, double eps_min);

  GridKind kind() const noexcept { return kind_; }
  double eps_min() const noexcept { return eps_min_; }
  /// Number of intervals; nodes().size() == intervals() + 1.
  std::size_t intervals() const noexcept { return nodes_.size() - 1; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  double operator[](std::size_t k) const noexcept { return nodes_[k]; }
  double step(std::size_t k) const noexcept { return nodes_[k + 1] - nodes_[k]; }
  double last() const noexcept { return nodes_.back(); }

  /// Index of the node equal to t within a relative tolerance; ConfigError otherwise.
  std::size_t index_of(double t, double rel_tol = 1e-9) const;

  bool operator==(const TimeGrid& other) const noexcept { return nodes_ == other.nodes_; }

private:
  GridKind kind_;
  double eps_min_;
  std::vector<double> nodes_;
};

using GridPtr = std::shared_ptr<const TimeGrid>;

/// Validates parameters (n >= 2, 0 < eps_min <= 1e-2) and builds a shared grid.
GridPtr make_grid(GridKind kind, std::size_t n, double eps_min);

/// Real or vector values attached to the nodes of a grid (row-major, node x dim).
class GridFunction {
public:
  enum class Tag { Function, Derivative };

  GridFunction(GridPtr grid, std::size_t dim, Tag tag);
  GridFunction(GridPtr grid, std::vector<double> values, std::size_t dim, Tag tag);

  /// Samples a scalar function at the nodes.
  static GridFunction sample(GridPtr grid, const std::function<double(double)>& fn, Tag tag);

  const TimeGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return dim_; }
  Tag tag() const noexcept { return tag_; }
  std::size_t size() const noexcept { return grid_->size(); }

  double& operator()(std::size_t node, std::size_t coord = 0) { return values_[node * dim_ + coord]; }
  double operator()(std::size_t node, std::size_t coord = 0) const { return values_[node * dim_ + coord]; }
  std::span<const double> values() const noexcept { return values_; }

  /// Trapezoidal L2 norm over the grid.
  double l2_norm() const;

private:
  GridPtr grid_;
  std::size_t dim_;
  Tag tag_;
  std::vector<double> values_;
};

/// Throws ContractViolation unless both functions live on the same nodes and dimension.
void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what);

/// Trapezoidal integral of nodal values from t = 0 up to `upper`, which may fall
/// inside a cell (the integrand is then interpolated linearly).
double trapezoid_to(const TimeGrid& grid, std::span<const double> values, double upper);

/// Trapezoidal integral over the whole grid.
double trapezoid(const TimeGrid& grid, std::span<const double> values);

}  // namespace gbb
