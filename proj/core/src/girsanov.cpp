#include "gbb/girsanov.hpp"

#include <algorithm>
#include <cmath>

#include "gbb/errors.hpp"

namespace gbb {

std::vector<double> MartingaleTrace::column(std::size_t j) const {
  std::vector<double> out(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) out[p] = at(p, j);
  return out;
}

void MartingaleTrace::append(const MartingaleTrace& other) {
  if (other.nodes != nodes) throw ContractViolation("cannot append traces with different retained nodes");
  log_m.insert(log_m.end(), other.log_m.begin(), other.log_m.end());
  n_paths += other.n_paths;
}

std::size_t MartingaleTrace::position(double t) const {
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (std::abs(times[j] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return j;
  }
  throw ConfigError("time " + std::to_string(t) + " is not retained in the trace");
}

std::vector<std::size_t> retained_nodes(const TimeGrid& grid, const std::vector<double>& t_keep) {
  std::vector<std::size_t> idx;
  if (t_keep.empty()) {
    for (std::size_t k = 0; k < grid.size(); ++k) idx.push_back(k);
    return idx;
  }
  idx.push_back(0);
  for (double t : t_keep) idx.push_back(grid.index_of(t));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

namespace {

MartingaleTrace empty_trace(const GridPtr& grid, std::size_t n_paths, const std::vector<double>& t_keep) {
  MartingaleTrace tr;
  tr.grid = grid;
  tr.nodes = retained_nodes(*grid, t_keep);
  for (std::size_t k : tr.nodes) tr.times.push_back((*grid)[k]);
  tr.n_paths = n_paths;
  tr.log_m.assign(n_paths * tr.nodes.size(), 0.0);
  return tr;
}

}  // namespace

MartingaleTrace log_rn_bridge(const PathEnsemble& ens, double c_target, const std::vector<double>& t_keep) {
  const auto& fam = ens.family();
  if (!fam || fam->kind() != DriftFamily::Kind::BridgeC || fam->c() != 1.0) {
    throw ContractViolation("log_rn_bridge expects paths of the classical bridge (BridgeC, c = 1)");
  }
  if (!(c_target > 0.0)) throw ConfigError("c_target must be positive");
  const TimeGrid& grid = ens.grid();
  MartingaleTrace tr = empty_trace(ens.grid_ptr(), ens.n_paths(), t_keep);
  const double b = 1.0 - c_target;
  const std::size_t dim = ens.dim();
  const std::size_t kept = tr.nodes.size();
  for (std::size_t p = 0; p < ens.n_paths(); ++p) {
    double log_m = 0.0;
    std::size_t next = 1;
    for (std::size_t k = 0; k + 1 < grid.size() && next < kept; ++k) {
      const double dt = grid.step(k);
      const double inv = 1.0 / (1.0 - grid[k]);
      double stoch = 0.0, quad = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double z = ens.at(p, k, d);
        const double db = ens.at(p, k + 1, d) - z + z * dt * inv;
        stoch += b * z * inv * db;
        quad += b * b * z * z * inv * inv * dt;
      }
      log_m += stoch - 0.5 * quad;
      if (k + 1 == tr.nodes[next]) tr.log_m[p * kept + next++] = log_m;
    }
  }
  return tr;
}

MartingaleTrace perturbed_rn(const PerturbedSample& sample, const std::vector<double>& t_keep) {
  const PathEnsemble& ens = sample.base;
  const std::size_t nodes = ens.n_nodes();
  if (sample.log_rn_increments.size() != ens.n_paths() * nodes) {
    throw ContractViolation("perturbed_rn: increment table does not match the ensemble");
  }
  MartingaleTrace tr = empty_trace(ens.grid_ptr(), ens.n_paths(), t_keep);
  const std::size_t kept = tr.nodes.size();
  for (std::size_t p = 0; p < ens.n_paths(); ++p) {
    double log_m = 0.0;
    std::size_t next = 1;
    for (std::size_t k = 1; k < nodes && next < kept; ++k) {
      log_m += sample.log_rn_increments[p * nodes + k];
      if (k == tr.nodes[next]) tr.log_m[p * kept + next++] = log_m;
    }
  }
  return tr;
}

std::vector<double> log_density_l2(const MartingaleTrace& trace) {
  const std::size_t kept = trace.nodes.size();
  std::vector<double> out(kept, 0.0);
  for (std::size_t j = 0; j < kept; ++j) {
    double sum = 0.0;
    for (std::size_t p = 0; p < trace.n_paths; ++p) sum += trace.at(p, j) * trace.at(p, j);
    out[j] = std::sqrt(sum / static_cast<double>(trace.n_paths));
  }
  return out;
}

double novikov_bound(double delta, double kappa, double sup_sq) {
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("novikov_bound requires 0 < delta < 1/2");
  return std::exp((1.0 + sup_sq) * kappa * kappa / (2.0 * (1.0 - 2.0 * delta)));
}

namespace {

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

DiagnosticsReport martingale_summary(const MartingaleTrace& trace, const std::vector<double>& t_list) {
  if (trace.n_paths == 0) throw ConfigError("martingale_summary: empty trace");
  DiagnosticsReport rep;
  rep.experiment = "martingale_summary";
  const double n = static_cast<double>(trace.n_paths);
  for (double t : t_list) {
    const std::size_t j = trace.position(t);
    std::vector<double> m = trace.column(j);
    for (double& x : m) x = std::exp(x);
    MartingaleRow row;
    row.t = trace.times[j];
    double sum = 0.0;
    for (double x : m) sum += x;
    row.mean = sum / n;
    double ss = 0.0;
    for (double x : m) ss += (x - row.mean) * (x - row.mean);
    row.se = trace.n_paths > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    std::sort(m.begin(), m.end());
    row.median = quantile_sorted(m, 0.5);
    row.q05 = quantile_sorted(m, 0.05);
    row.q95 = quantile_sorted(m, 0.95);
    row.mass_collapse = row.median < kCollapseMedian && std::abs(row.mean - 1.0) <= 3.0 * row.se;
    if (row.mass_collapse) rep.flags.push_back("mass-collapse@t=" + std::to_string(row.t));
    rep.rows.push_back(row);
  }
  return rep;
}

MartingaleTrace run_bridge_girsanov(double c_target, GridPtr grid, std::size_t dim, std::size_t n_paths,
                                    std::uint64_t seed, const std::vector<double>& t_keep, std::size_t chunk_paths) {
  if (chunk_paths == 0) throw ConfigError("chunk size must be positive");
  const DriftFamily base = DriftFamily::bridge(1.0);
  MartingaleTrace out = empty_trace(grid, 0, t_keep);
  for (std::size_t first = 0; first < n_paths; first += chunk_paths) {
    const std::size_t count = std::min(chunk_paths, n_paths - first);
    const PathEnsemble ens = sample_exact(base, grid, dim, count, seed, first);
    out.append(log_rn_bridge(ens, c_target, t_keep));
  }
  return out;
}

MartingaleTrace run_perturbed_girsanov(const DriftFamily& fam, GridPtr grid, std::size_t dim, std::size_t n_paths,
                                       std::uint64_t seed, const std::vector<double>& t_keep,
                                       std::size_t chunk_paths) {
  if (chunk_paths == 0) throw ConfigError("chunk size must be positive");
  MartingaleTrace out = empty_trace(grid, 0, t_keep);
  for (std::size_t first = 0; first < n_paths; first += chunk_paths) {
    const std::size_t count = std::min(chunk_paths, n_paths - first);
    out.append(perturbed_rn(sample_perturbed(fam, grid, dim, count, seed, first), t_keep));
  }
  return out;
}

}  // namespace gbb
