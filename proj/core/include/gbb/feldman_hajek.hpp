#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "gbb/grid.hpp"
#include "gbb/trend.hpp"

namespace gbb {

/// Covariance kernel selector for cov_matrix.
struct CovKernel {
  enum class Kind { BrownianBridge, BridgeC };
  Kind kind = Kind::BrownianBridge;
  double c = 1.0;

  static CovKernel brownian_bridge() { return {Kind::BrownianBridge, 1.0}; }
  static CovKernel bridge(double c) { return {Kind::BridgeC, c}; }

  double operator()(double s, double t) const;
  std::string describe() const;
};

/// Kernel values at all node pairs of a grid.
struct CovMatrix {
  GridPtr grid;
  CovKernel kernel;
  Eigen::MatrixXd m;
};

/// Builds the matrix and checks symmetry (1e-12 relative) and positive
/// semidefiniteness (Cholesky of M + 1e-10 trace(M) I must succeed);
/// NumericalFailure otherwise.
CovMatrix cov_matrix(const CovKernel& kernel, GridPtr grid);

/// Writes the matrix as CSV with a header row of node times.
void write_matrix_csv(const CovMatrix& cov, std::ostream& out);

/// Eigenvalues (ascending) of L^{-1} Rc L^{-T} - I with R = L L^T, both
/// restricted to the interior nodes (t = 0 dropped).
std::vector<double> whiten_spectrum(const CovMatrix& r, const CovMatrix& rc);

/// Sum of squared whitened eigenvalues, computed as ||L^{-1} Rc L^{-T} - I||_F^2.
double hs_norm_sq(const CovMatrix& r, const CovMatrix& rc);

/// 1/2 (tr(R^{-1} Rc) + tr(Rc^{-1} R) - 2m) on interior nodes.
double sym_kl(const CovMatrix& r, const CovMatrix& rc);

/// Grid used for the n-refinement trends: geometric with
/// eps_min(n) = min(1e-2, 1e-2 (64/n)^2), so refinement also moves the
/// clamp toward t = 1.
GridPtr fh_trend_grid(std::size_t n);

inline constexpr std::size_t kMaxDenseNodes = 2048;

/// hs_norm_sq of cov_Q(c) against the bridge covariance for each n.
TrendReport hs_trend(double c, const std::vector<std::size_t>& n_list);

/// sym_kl of cov_Q(c) against the bridge covariance for each n.
TrendReport kl_trend(double c, const std::vector<std::size_t>& n_list);

/// V(eps) = int int_{[0,1-eps]^2} q_c^2 by nested adaptive quadrature,
/// regressed linearly on ln(1/eps). Default eps list 1e-3 .. 1e-6.
TrendReport qc_l2_trend(double c, std::vector<double> eps_list = {});

/// Nodes of the grid with t = 1 appended.
std::vector<double> extended_nodes(const TimeGrid& grid);

/// (Af)(t) = int_0^t f - t int_0^1 f at the grid nodes. The integrals use the
/// trapezoid rule on the extended nodes, with f continued linearly to t = 1.
GridFunction apply_A(const GridFunction& f);

/// (A* phi)(t) = int_t^1 phi - int_0^1 s phi(s) ds, same discretization.
GridFunction apply_A_star(const GridFunction& phi);

/// Matrix forms on the extended nodes tau_0..tau_N (tau_N = 1) acting on
/// cell values (left-point rule): rows are nodes 0..N, columns cells 0..N-1.
Eigen::MatrixXd a_matrix(const TimeGrid& grid);
Eigen::MatrixXd a_star_matrix(const TimeGrid& grid);

/// max_{i,l} |(A A*)_{il} / dt_l - (s^t - st)(tau_i, tau_l)| with A* output
/// sampled at left cell points before A is applied.
double r_factorization_deviation(const TimeGrid& grid);

struct QConsistency {
  /// max |E - q| / (1 + |q|) over cells, the last cell excluded.
  double max_rel_deviation = 0.0;
  /// Same maximum without normalization.
  double max_abs_deviation = 0.0;
  std::size_t cells = 0;
};

/// With K the Q_c matrix on extended nodes (Q(., 1) = 0) and D the forward
/// difference (exact inverse of the discrete A on functions vanishing at both
/// ends), E = D K D^T - diag(1/dt) is the discrete kernel of
/// A^{-1} R_c (A*)^{-1} - I; it is compared to q_c at the cell corners.
/// DomainError unless c > 1/2.
QConsistency discrete_q_consistency(double c, const TimeGrid& grid);

}  // namespace gbb
