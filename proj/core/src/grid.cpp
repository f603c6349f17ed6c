#include "gbb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gbb/errors.hpp"

namespace gbb {

const char* to_string(GridKind kind) noexcept {
  return kind == GridKind::Uniform ? "uniform" : "geometric";
}

GridKind parse_grid_kind(const std::string& name) {
  if (name == "uniform") return GridKind::Uniform;
  if (name == "geometric") return GridKind::Geometric;
  throw ConfigError("unknown grid kind '" + name + "' (expected uniform or geometric)");
}

TimeGrid::TimeGrid(GridKind kind, std::size_t n, double eps_min) : kind_(kind), eps_min_(eps_min) {
  if (n < 2) throw ConfigError("grid requires n >= 2 intervals");
  if (!(eps_min > 0.0 && eps_min < 1.0)) throw ConfigError("grid requires 0 < eps_min < 1");
  nodes_.resize(n + 1);
  const double dn = static_cast<double>(n);
  if (kind == GridKind::Uniform) {
    for (std::size_t k = 0; k <= n; ++k) nodes_[k] = (1.0 - eps_min) * (static_cast<double>(k) / dn);
  } else {
    const double log_eps = std::log(eps_min);
    for (std::size_t k = 0; k <= n; ++k) {
      nodes_[k] = -std::expm1(log_eps * (static_cast<double>(k) / dn));
    }
  }
  nodes_.front() = 0.0;
  nodes_.back() = 1.0 - eps_min;
  for (std::size_t k = 1; k <= n; ++k) {
    if (!(nodes_[k] > nodes_[k - 1])) {
      throw ConfigError("grid nodes collapse in double precision; reduce n or increase eps_min");
    }
  }
}

std::size_t TimeGrid::index_of(double t, double rel_tol) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
  const double tol = rel_tol * std::max(1.0, std::abs(t));
  std::size_t best = nodes_.size();
  double best_dist = tol;
  for (auto cand : {it, it == nodes_.begin() ? it : it - 1}) {
    if (cand == nodes_.end()) continue;
    const double dist = std::abs(*cand - t);
    if (dist <= best_dist) {
      best_dist = dist;
      best = static_cast<std::size_t>(cand - nodes_.begin());
    }
  }
  if (best == nodes_.size()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "time " << t << " is not a grid node";
    throw ConfigError(msg.str());
  }
  return best;
}

GridPtr make_grid(GridKind kind, std::size_t n, double eps_min) {
  if (!(eps_min > 0.0 && eps_min <= 1e-2)) throw ConfigError("grid requires 0 < eps_min <= 1e-2");
  return std::make_shared<const TimeGrid>(kind, n, eps_min);
}

GridFunction::GridFunction(GridPtr grid, std::size_t dim, Tag tag)
    : grid_(std::move(grid)), dim_(dim), tag_(tag) {
  if (!grid_) throw ConfigError("grid function requires a grid");
  if (dim_ == 0) throw ConfigError("grid function requires dim >= 1");
  values_.assign(grid_->size() * dim_, 0.0);
}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values, std::size_t dim, Tag tag)
    : grid_(std::move(grid)), dim_(dim), tag_(tag), values_(std::move(values)) {
  if (!grid_) throw ConfigError("grid function requires a grid");
  if (dim_ == 0 || values_.size() != grid_->size() * dim_) {
    throw ConfigError("grid function values do not match grid size x dim");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("grid function values must be finite");
  }
}

GridFunction GridFunction::sample(GridPtr grid, const std::function<double(double)>& fn, Tag tag) {
  std::vector<double> values(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) values[k] = fn((*grid)[k]);
  return GridFunction(std::move(grid), std::move(values), 1, tag);
}

double GridFunction::l2_norm() const {
  std::vector<double> sq(size(), 0.0);
  for (std::size_t k = 0; k < size(); ++k) {
    for (std::size_t d = 0; d < dim_; ++d) sq[k] += (*this)(k, d) * (*this)(k, d);
  }
  return std::sqrt(trapezoid(*grid_, sq));
}

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what) {
  if (a.dim() != b.dim() || (a.grid_ptr() != b.grid_ptr() && !(a.grid() == b.grid()))) {
    throw ContractViolation(std::string(what) + ": grid functions live on different grids");
  }
}

double trapezoid_to(const TimeGrid& grid, std::span<const double> values, double upper) {
  if (values.size() != grid.size()) throw ContractViolation("trapezoid: value count does not match grid");
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double a = grid[k];
    const double b = grid[k + 1];
    if (upper <= a) break;
    if (upper >= b) {
      sum += 0.5 * (values[k] + values[k + 1]) * (b - a);
    } else {
      const double w = (upper - a) / (b - a);
      const double vu = values[k] + w * (values[k + 1] - values[k]);
      sum += 0.5 * (values[k] + vu) * (upper - a);
      break;
    }
  }
  return sum;
}

double trapezoid(const TimeGrid& grid, std::span<const double> values) {
  return trapezoid_to(grid, values, grid.last());
}

}  // namespace gbb
