#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gbb/drift.hpp"
#include "gbb/grid.hpp"
#include "gbb/sampler.hpp"

namespace gbb {

/// Per-path log-density log M_t at a retained subset of grid nodes.
/// Node 0 is always retained and log M_0 = 0.
struct MartingaleTrace {
  GridPtr grid;
  std::vector<std::size_t> nodes;  ///< retained node indices, ascending
  std::vector<double> times;       ///< grid times of the retained nodes
  std::size_t n_paths = 0;
  std::vector<double> log_m;  ///< (path, retained node)

  double at(std::size_t path, std::size_t j) const { return log_m[path * nodes.size() + j]; }
  /// log M at retained node j across all paths.
  std::vector<double> column(std::size_t j) const;
  /// Concatenates the paths of another trace with the same retained nodes.
  void append(const MartingaleTrace& other);
  /// Position of time t among the retained times; ConfigError if absent.
  std::size_t position(double t) const;
};

/// Retained node indices for the given times (all nodes when empty), with 0 added.
std::vector<std::size_t> retained_nodes(const TimeGrid& grid, const std::vector<double>& t_keep);

/// Density of the c_target bridge against the classical bridge along c = 1 paths:
///   log M = sum <(1-c) z_k/(1-t_k), dB_k> - 1/2 sum (1-c)^2 |z_k|^2/(1-t_k)^2 dt_k,
/// with dB_k = dz_k + z_k dt_k/(1-t_k) recovered from the path.
/// ContractViolation unless ens was drawn from BridgeC with c = 1.
MartingaleTrace log_rn_bridge(const PathEnsemble& ens, double c_target, const std::vector<double>& t_keep = {});

/// Cumulative density exp(N_t - <N>_t / 2) from the perturbed sampler's increments.
MartingaleTrace perturbed_rn(const PerturbedSample& sample, const std::vector<double>& t_keep = {});

/// sqrt(mean over paths of (N_t - <N>_t/2)^2) at each retained node.
std::vector<double> log_density_l2(const MartingaleTrace& trace);

/// exp((1 + sup_sq) kappa^2 / (2 (1 - 2 delta))). DomainError unless 0 < delta < 1/2.
double novikov_bound(double delta, double kappa, double sup_sq);

struct MartingaleRow {
  double t = 0.0;
  double mean = 0.0;
  double se = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  bool mass_collapse = false;
};

/// Result of a martingale experiment: per-t statistics plus named scalars.
struct DiagnosticsReport {
  std::string experiment;
  std::vector<MartingaleRow> rows;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<std::string> flags;
};

inline constexpr double kCollapseMedian = 0.01;
inline constexpr double kMedianFloor = 0.1;

/// Mean, standard error, median and 5%/95% quantiles (linear interpolation
/// between order statistics) of M_t for each t. mass_collapse is set when the
/// median is below 0.01 while the mean stays within 3 SE of 1.
DiagnosticsReport martingale_summary(const MartingaleTrace& trace, const std::vector<double>& t_list);

/// Samples exact c = 1 paths in chunks of chunk_paths (paths keep their global
/// index, so the result does not depend on the chunk size) and returns the
/// density trace of the c_target bridge.
MartingaleTrace run_bridge_girsanov(double c_target, GridPtr grid, std::size_t dim, std::size_t n_paths,
                                    std::uint64_t seed, const std::vector<double>& t_keep,
                                    std::size_t chunk_paths = 8192);

/// Same for the perturbed bridge family.
MartingaleTrace run_perturbed_girsanov(const DriftFamily& fam, GridPtr grid, std::size_t dim, std::size_t n_paths,
                                       std::uint64_t seed, const std::vector<double>& t_keep,
                                       std::size_t chunk_paths = 8192);

}  // namespace gbb
