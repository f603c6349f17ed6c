#include "gbb/feldman_hajek.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "gbb/errors.hpp"
#include "gbb/kernels.hpp"
#include "gbb/parallel.hpp"
#include "gbb/quadrature.hpp"

namespace gbb {

double CovKernel::operator()(double s, double t) const {
  if (kind == Kind::BrownianBridge) return std::min(s, t) - s * t;
  return cov_Q(c, s, t);
}

std::string CovKernel::describe() const {
  if (kind == Kind::BrownianBridge) return "bb";
  char buf[64];
  std::snprintf(buf, sizeof buf, "bridge_c(%.17g)", c);
  return buf;
}

CovMatrix cov_matrix(const CovKernel& kernel, GridPtr grid) {
  if (!grid) throw ConfigError("cov_matrix requires a grid");
  const std::size_t m = grid->size();
  if (m > kMaxDenseNodes + 1) throw ConfigError("cov_matrix: grid exceeds the dense budget");
  CovMatrix cov{grid, kernel, Eigen::MatrixXd(m, m)};
  const auto nodes = grid->nodes();
  parallel_for_chunks(m, [&](std::size_t i) {
    for (std::size_t j = 0; j < m; ++j) cov.m(i, j) = kernel(nodes[i], nodes[j]);
  });
  const double scale = std::max(cov.m.cwiseAbs().maxCoeff(), 1e-300);
  if ((cov.m - cov.m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw NumericalFailure("cov_matrix: kernel matrix is not symmetric");
  }
  const double shift = 1e-10 * std::max(cov.m.trace(), 0.0);
  Eigen::MatrixXd shifted = cov.m;
  shifted.diagonal().array() += shift;
  if (Eigen::LLT<Eigen::MatrixXd>(shifted).info() != Eigen::Success) {
    throw NumericalFailure("cov_matrix: smallest eigenvalue below -1e-10 trace (not PSD)");
  }
  return cov;
}

void write_matrix_csv(const CovMatrix& cov, std::ostream& out) {
  char buf[32];
  out << "t";
  for (double t : cov.grid->nodes()) {
    std::snprintf(buf, sizeof buf, "%.17g", t);
    out << ',' << buf;
  }
  out << '\n';
  for (Eigen::Index i = 0; i < cov.m.rows(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", (*cov.grid)[static_cast<std::size_t>(i)]);
    out << buf;
    for (Eigen::Index j = 0; j < cov.m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", cov.m(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
}

namespace {

Eigen::MatrixXd interior(const CovMatrix& cov) {
  const Eigen::Index m = cov.m.rows() - 1;
  return cov.m.bottomRightCorner(m, m);
}

void require_pair(const CovMatrix& r, const CovMatrix& rc) {
  if (!r.grid || !rc.grid || !(*r.grid == *rc.grid)) throw ContractViolation("covariance matrices live on different grids");
}

Eigen::MatrixXd lower_factor(const Eigen::MatrixXd& a, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalFailure(std::string(what) + ": Cholesky factorization failed");
  return llt.matrixL();
}

// L^{-1} Rc L^{-T} - I
Eigen::MatrixXd whitened_difference(const CovMatrix& r, const CovMatrix& rc) {
  require_pair(r, rc);
  const Eigen::MatrixXd l = lower_factor(interior(r), "whiten_spectrum");
  Eigen::MatrixXd w = l.triangularView<Eigen::Lower>().solve(interior(rc));
  w = l.triangularView<Eigen::Lower>().solve(w.transpose()).transpose();
  w = 0.5 * (w + w.transpose());
  w.diagonal().array() -= 1.0;
  return w;
}

}  // namespace

std::vector<double> whiten_spectrum(const CovMatrix& r, const CovMatrix& rc) {
  const Eigen::MatrixXd w = whitened_difference(r, rc);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalFailure("whiten_spectrum: eigenvalue solve failed");
  const Eigen::VectorXd& ev = eig.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double hs_norm_sq(const CovMatrix& r, const CovMatrix& rc) { return whitened_difference(r, rc).squaredNorm(); }

double sym_kl(const CovMatrix& r, const CovMatrix& rc) {
  require_pair(r, rc);
  const Eigen::MatrixXd l = lower_factor(interior(r), "sym_kl");
  const Eigen::MatrixXd lc = lower_factor(interior(rc), "sym_kl");
  // tr(R^{-1} Rc) = ||L^{-1} Lc||_F^2 and symmetrically.
  const double a = l.triangularView<Eigen::Lower>().solve(lc).squaredNorm();
  const double b = lc.triangularView<Eigen::Lower>().solve(l).squaredNorm();
  const double m = static_cast<double>(l.rows());
  return std::max(0.0, 0.5 * (a + b - 2.0 * m));
}

GridPtr fh_trend_grid(std::size_t n) {
  const double ratio = 64.0 / static_cast<double>(n);
  return make_grid(GridKind::Geometric, n, std::min(1e-2, 1e-2 * ratio * ratio));
}

namespace {

template <typename Metric>
TrendReport n_trend(double c, const std::vector<std::size_t>& n_list, Metric metric, const char* name) {
  if (n_list.size() < 2) throw ConfigError("n trend needs at least two n values");
  std::vector<double> ns, values;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] > kMaxDenseNodes) throw ConfigError("n exceeds the dense solve budget (2048)");
    if (i > 0 && n_list[i] <= n_list[i - 1]) throw ConfigError("n list must be strictly increasing");
    const GridPtr grid = fh_trend_grid(n_list[i]);
    const CovMatrix r = cov_matrix(CovKernel::brownian_bridge(), grid);
    const CovMatrix rc = cov_matrix(CovKernel::bridge(c), grid);
    ns.push_back(static_cast<double>(n_list[i]));
    values.push_back(metric(r, rc));
  }
  TrendReport rep = classify_n_trend(std::move(ns), std::move(values));
  rep.ordinate_name = name;
  return rep;
}

}  // namespace

TrendReport hs_trend(double c, const std::vector<std::size_t>& n_list) {
  return n_trend(c, n_list, hs_norm_sq, "hs_norm_sq");
}

TrendReport kl_trend(double c, const std::vector<std::size_t>& n_list) {
  return n_trend(c, n_list, sym_kl, "sym_kl");
}

TrendReport qc_l2_trend(double c, std::vector<double> eps_list) {
  if (!(c > 0.5) || std::abs(2.0 * c - 1.0) < kHalfExclusion) {
    throw DomainError("qc_l2_trend requires c > 1/2 outside the 1/2 neighbourhood");
  }
  if (eps_list.empty()) eps_list = {1e-3, 1e-4, 1e-5, 1e-6};
  for (double e : eps_list) {
    if (!(e >= 1e-6 && e < 1.0)) throw ConfigError("qc_l2_trend: eps must lie in [1e-6, 1)");
  }
  std::vector<double> values(eps_list.size());
  // With u = -ln(1-t), v = -ln(1-s) the integrand e^{-u-v} q^2 stays bounded
  // and the square [0, 1-eps]^2 becomes twice the triangle v < u < ln(1/eps).
  parallel_for_chunks(eps_list.size(), [&](std::size_t i) {
    const double upper = -std::log(eps_list[i]);
    auto inner = [c](double u) {
      const double t = -std::expm1(-u);
      QuadratureOptions opts;
      opts.abs_tol = 1e-12;
      return integrate(
                 [&](double v) {
                   const double q = fh_kernel_q(c, -std::expm1(-v), t);
                   return std::exp(-u - v) * q * q;
                 },
                 0.0, u, opts)
          .value;
    };
    QuadratureOptions opts;
    opts.abs_tol = 1e-10;
    values[i] = 2.0 * integrate(inner, 0.0, upper, opts).value;
  });
  TrendReport rep = classify_log_linear_trend(std::move(eps_list), std::move(values));
  rep.ordinate_name = "qc_l2_sq";
  return rep;
}

std::vector<double> extended_nodes(const TimeGrid& grid) {
  std::vector<double> tau(grid.nodes().begin(), grid.nodes().end());
  tau.push_back(1.0);
  return tau;
}

namespace {

// Values at the extended nodes, continued linearly to t = 1.
std::vector<double> extend_linear(const GridFunction& f, std::size_t d) {
  const TimeGrid& grid = f.grid();
  const std::size_t n = grid.size();
  std::vector<double> v(n + 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(i, d);
  const double slope = (v[n - 1] - v[n - 2]) / grid.step(n - 2);
  v[n] = v[n - 1] + slope * (1.0 - grid.last());
  return v;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& tau, const std::vector<double>& v) {
  std::vector<double> out(tau.size(), 0.0);
  for (std::size_t i = 0; i + 1 < tau.size(); ++i) out[i + 1] = out[i] + 0.5 * (v[i] + v[i + 1]) * (tau[i + 1] - tau[i]);
  return out;
}

}  // namespace

GridFunction apply_A(const GridFunction& f) {
  const TimeGrid& grid = f.grid();
  const std::vector<double> tau = extended_nodes(grid);
  GridFunction out(f.grid_ptr(), f.dim(), GridFunction::Tag::Function);
  for (std::size_t d = 0; d < f.dim(); ++d) {
    const std::vector<double> cum = cumulative_trapezoid(tau, extend_linear(f, d));
    for (std::size_t i = 0; i < grid.size(); ++i) out(i, d) = cum[i] - tau[i] * cum.back();
  }
  return out;
}

GridFunction apply_A_star(const GridFunction& phi) {
  const TimeGrid& grid = phi.grid();
  const std::vector<double> tau = extended_nodes(grid);
  GridFunction out(phi.grid_ptr(), phi.dim(), GridFunction::Tag::Function);
  for (std::size_t d = 0; d < phi.dim(); ++d) {
    const std::vector<double> v = extend_linear(phi, d);
    std::vector<double> sv(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sv[i] = tau[i] * v[i];
    const std::vector<double> cum = cumulative_trapezoid(tau, v);
    const double first_moment = cumulative_trapezoid(tau, sv).back();
    for (std::size_t i = 0; i < grid.size(); ++i) out(i, d) = (cum.back() - cum[i]) - first_moment;
  }
  return out;
}

Eigen::MatrixXd a_matrix(const TimeGrid& grid) {
  const std::vector<double> tau = extended_nodes(grid);
  const auto cells = static_cast<Eigen::Index>(tau.size() - 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(cells + 1, cells);
  for (Eigen::Index i = 0; i <= cells; ++i) {
    for (Eigen::Index j = 0; j < cells; ++j) {
      const double dt = tau[j + 1] - tau[j];
      a(i, j) = ((j < i) ? dt : 0.0) - tau[i] * dt;
    }
  }
  return a;
}

Eigen::MatrixXd a_star_matrix(const TimeGrid& grid) {
  const std::vector<double> tau = extended_nodes(grid);
  const auto cells = static_cast<Eigen::Index>(tau.size() - 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(cells + 1, cells);
  for (Eigen::Index i = 0; i <= cells; ++i) {
    for (Eigen::Index l = 0; l < cells; ++l) {
      const double dt = tau[l + 1] - tau[l];
      a(i, l) = ((l >= i) ? dt : 0.0) - tau[l] * dt;
    }
  }
  return a;
}

double r_factorization_deviation(const TimeGrid& grid) {
  const std::vector<double> tau = extended_nodes(grid);
  const auto cells = static_cast<Eigen::Index>(tau.size() - 1);
  const Eigen::MatrixXd a = a_matrix(grid);
  // A* output at the left point of each cell feeds A.
  const Eigen::MatrixXd product = a * a_star_matrix(grid).topRows(cells);
  double worst = 0.0;
  for (Eigen::Index i = 0; i <= cells; ++i) {
    for (Eigen::Index l = 0; l < cells; ++l) {
      const double density = product(i, l) / (tau[l + 1] - tau[l]);
      const double r = std::min(tau[i], tau[l]) - tau[i] * tau[l];
      worst = std::max(worst, std::abs(density - r));
    }
  }
  return worst;
}

QConsistency discrete_q_consistency(double c, const TimeGrid& grid) {
  if (!(c > 0.5)) throw DomainError("discrete_q_consistency requires c > 1/2");
  const std::vector<double> tau = extended_nodes(grid);
  const std::size_t nodes = tau.size();
  const std::size_t cells = nodes - 1;
  for (std::size_t j = 0; j < cells; ++j) {
    if (!(tau[j + 1] - tau[j] > 0.0)) throw NumericalFailure("discrete_q_consistency: degenerate cell, A is singular");
  }
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nodes), static_cast<Eigen::Index>(nodes));
  parallel_for_chunks(cells, [&](std::size_t i) {
    for (std::size_t j = 0; j < cells; ++j) k(i, j) = cov_Q(c, tau[i], tau[j]);
  });

  QConsistency res;
  res.cells = cells - 1;
  std::vector<double> rel(cells - 1, 0.0), abs_dev(cells - 1, 0.0);
  parallel_for_chunks(cells - 1, [&](std::size_t j) {
    const double dj = tau[j + 1] - tau[j];
    for (std::size_t l = 0; l + 1 < cells; ++l) {
      const double dl = tau[l + 1] - tau[l];
      // Entry (j, l) of D K D^T.
      double e = (k(j + 1, l + 1) - k(j + 1, l) - k(j, l + 1) + k(j, l)) / (dj * dl);
      if (j == l) e -= 1.0 / dj;
      const double q = fh_kernel_q(c, tau[j], tau[l]);
      const double dev = std::abs(e - q);
      abs_dev[j] = std::max(abs_dev[j], dev);
      rel[j] = std::max(rel[j], dev / (1.0 + std::abs(q)));
    }
  });
  res.max_rel_deviation = *std::max_element(rel.begin(), rel.end());
  res.max_abs_deviation = *std::max_element(abs_dev.begin(), abs_dev.end());
  return res;
}

}  // namespace gbb
