#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gbb/drift.hpp"
#include "gbb/grid.hpp"

namespace gbb {

enum class SamplerKind { Exact, EulerMaruyama, BrownianBridgeRep, Perturbed };

const char* to_string(SamplerKind kind) noexcept;

/// n_paths sampled paths of dimension `dim` on a grid, stored path-major
/// (path, node, coordinate). Every path starts at 0. Paths are numbered from
/// `first_path`, which keys the random stream, so an ensemble can be produced
/// in independent chunks.
class PathEnsemble {
public:
  PathEnsemble(GridPtr grid, std::size_t dim, std::size_t n_paths, std::uint64_t seed, std::uint64_t first_path,
               SamplerKind sampler, std::optional<DriftFamily> family);

  const TimeGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t n_paths() const noexcept { return n_paths_; }
  std::size_t n_nodes() const noexcept { return grid_->size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t first_path() const noexcept { return first_path_; }
  SamplerKind sampler() const noexcept { return sampler_; }
  /// Family the paths were drawn from; empty for ad-hoc drifts.
  const std::optional<DriftFamily>& family() const noexcept { return family_; }

  double& at(std::size_t path, std::size_t node, std::size_t coord = 0) {
    return values_[(path * n_nodes() + node) * dim_ + coord];
  }
  double at(std::size_t path, std::size_t node, std::size_t coord = 0) const {
    return values_[(path * n_nodes() + node) * dim_ + coord];
  }
  std::span<double> path(std::size_t p) { return {values_.data() + p * n_nodes() * dim_, n_nodes() * dim_}; }
  std::span<const double> path(std::size_t p) const {
    return {values_.data() + p * n_nodes() * dim_, n_nodes() * dim_};
  }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }

private:
  GridPtr grid_;
  std::size_t dim_;
  std::size_t n_paths_;
  std::uint64_t seed_;
  std::uint64_t first_path_;
  SamplerKind sampler_;
  std::optional<DriftFamily> family_;
  std::vector<double> values_;
};

/// Per-step Gaussian transition z(t_{k+1}) = decay[k] z(t_k) + stddev[k] xi.
struct TransitionTable {
  std::vector<double> decay;
  std::vector<double> stddev;
};

/// Exact transition coefficients: decay = exp(L(t) - L(t')),
/// variance = int_t^{t'} exp(2 (L(s) - L(t'))) ds with L = log_phi.
/// Closed form for BridgeC, quadrature for PowerAlpha.
TransitionTable exact_transitions(const DriftFamily& fam, const TimeGrid& grid);

/// Exact Gaussian-transition sampler for BridgeC and PowerAlpha.
PathEnsemble sample_exact(const DriftFamily& fam, GridPtr grid, std::size_t dim, std::size_t n_paths,
                          std::uint64_t seed, std::uint64_t first_path = 0);

/// Euler-Maruyama for dz = dB - f(t) z dt. A step with f(t_k) dt_k > 1 is split
/// into equal sub-steps until every sub-step satisfies f * dt <= 1.
PathEnsemble sample_em(const DriftFamily& fam, GridPtr grid, std::size_t dim, std::size_t n_paths,
                       std::uint64_t seed, std::uint64_t first_path = 0);

/// Euler-Maruyama with an arbitrary nonnegative drift coefficient f(t).
PathEnsemble sample_em_drift(const std::function<double(double)>& drift, GridPtr grid, std::size_t dim,
                             std::size_t n_paths, std::uint64_t seed, std::uint64_t first_path = 0);

/// Number of equal sub-steps the EM stabilization rule uses on [t, t + dt].
std::size_t em_substeps(const std::function<double(double)>& drift, double t, double dt);

/// Brownian bridge as B_t - t B_1, with B simulated on the grid plus t = 1.
PathEnsemble sample_bb_rep(GridPtr grid, std::size_t dim, std::size_t n_paths, std::uint64_t seed,
                           std::uint64_t first_path = 0);

/// Output of the perturbed sampler.
struct PerturbedSample {
  /// Paths x of dx = dB - x/(1-t) dt + pert(t,x)/(1-t)^delta dt.
  PathEnsemble paths;
  /// Base bridge paths z driven by the same Brownian increments.
  PathEnsemble base;
  /// Per-path log-density increments along the base paths, (path, node);
  /// entry k holds the increment accumulated over [t_{k-1}, t_k], entry 0 is 0.
  std::vector<double> log_rn_increments;
};

/// Euler-Maruyama for the perturbed bridge, with the Girsanov log-density of
/// the perturbed law against the classical bridge accumulated along the base
/// paths (left-point rule). The growth bound is checked at every visited
/// state; a violation throws ContractViolation naming (t, x).
PerturbedSample sample_perturbed(const DriftFamily& fam, GridPtr grid, std::size_t dim, std::size_t n_paths,
                                 std::uint64_t seed, std::uint64_t first_path = 0);

struct SupNormStats {
  double mean_sup = 0.0;
  double se_sup = 0.0;
  double exp_moment = 0.0;
  double se_exp_moment = 0.0;
  /// Set when a >= 1/8, where the exponential moment may not exist.
  bool exp_moment_warning = false;
};

/// Monte Carlo statistics of sup_t |z_t| over grid nodes and of exp(a sup |z|^2).
SupNormStats sup_norm_stats(const PathEnsemble& ens, double a);

}  // namespace gbb
