#include "gbb/cameron_martin.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "gbb/errors.hpp"

namespace gbb {
namespace {

std::vector<double> log_phi_nodes(const DriftFamily& fam, const TimeGrid& grid) {
  std::vector<double> l(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) l[j] = log_phi(fam, grid[j]);
  return l;
}

// int_a^b (1-x)^p dx in a form that stays accurate for p near -1 and short cells.
double power_integral(double p, double a, double b) {
  const double log_r = std::log1p(-b) - std::log1p(-a);
  const double q = p + 1.0;
  if (q == 0.0) return -log_r;
  return std::exp(q * std::log1p(-a)) * -std::expm1(q * log_r) / q;
}

void require_eps_within(const TimeGrid& grid, const std::vector<double>& eps) {
  if (eps.size() < 2) throw ConfigError("diagnostic needs at least two eps values");
  for (double e : eps) {
    if (1.0 - e > grid.last() * (1.0 + 1e-12)) {
      throw ConfigError("eps value reaches beyond the last grid node; refine eps_min");
    }
  }
}

std::vector<double> integrate_per_eps(const TimeGrid& grid, const std::vector<double>& integrand,
                                      const std::vector<double>& eps) {
  std::vector<double> out(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    out[i] = trapezoid_to(grid, integrand, std::min(1.0 - eps[i], grid.last()));
  }
  return out;
}

}  // namespace

GridFunction apply_T(const DriftFamily& fam, const GridFunction& hdot) {
  if (hdot.tag() != GridFunction::Tag::Derivative) throw ContractViolation("apply_T expects a derivative-tagged input");
  const TimeGrid& grid = hdot.grid();
  const std::size_t dim = hdot.dim();
  const std::vector<double> l = log_phi_nodes(fam, grid);
  GridFunction k(hdot.grid_ptr(), dim, GridFunction::Tag::Function);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double a = std::exp(l[j] - l[j + 1]);
    const double half = 0.5 * grid.step(j);
    for (std::size_t d = 0; d < dim; ++d) {
      k(j + 1, d) = a * k(j, d) + half * (a * hdot(j, d) + hdot(j + 1, d));
    }
  }
  return k;
}

GridFunction apply_T_inv(const DriftFamily& fam, const GridFunction& k) {
  if (k.tag() != GridFunction::Tag::Function) throw ContractViolation("apply_T_inv expects a function-tagged input");
  const TimeGrid& grid = k.grid();
  const std::size_t n = grid.size();
  if (n < 3) throw ConfigError("apply_T_inv needs at least three nodes");
  const std::size_t dim = k.dim();
  GridFunction hdot(k.grid_ptr(), dim, GridFunction::Tag::Derivative);
  for (std::size_t d = 0; d < dim; ++d) {
    for (std::size_t i = 0; i < n; ++i) {
      double deriv = 0.0;
      if (i == 0) {
        const double h1 = grid.step(0), h2 = grid.step(1);
        deriv = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * k(0, d) + (h1 + h2) / (h1 * h2) * k(1, d) -
                h1 / (h2 * (h1 + h2)) * k(2, d);
      } else if (i == n - 1) {
        const double h1 = grid.step(n - 3), h2 = grid.step(n - 2);
        deriv = h2 / (h1 * (h1 + h2)) * k(n - 3, d) - (h1 + h2) / (h1 * h2) * k(n - 2, d) +
                (h1 + 2.0 * h2) / (h2 * (h1 + h2)) * k(n - 1, d);
      } else {
        const double h1 = grid.step(i - 1), h2 = grid.step(i);
        deriv = -h2 / (h1 * (h1 + h2)) * k(i - 1, d) + (h2 - h1) / (h1 * h2) * k(i, d) +
                h1 / (h2 * (h1 + h2)) * k(i + 1, d);
      }
      hdot(i, d) = deriv + drift_coefficient(fam, grid[i]) * k(i, d);
    }
  }
  return hdot;
}

Lemma1Result lemma1_g(double c, const GridFunction& f) {
  if (!(c > 0.5)) throw DomainError("lemma1_g requires c > 1/2");
  if (f.dim() != 1) throw ConfigError("lemma1_g expects a scalar function");
  const TimeGrid& grid = f.grid();
  const std::size_t n = grid.size();

  // 5-point Gauss-Legendre on [-1, 1].
  static constexpr std::array<double, 5> kX = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                               0.9061798459386640};
  static constexpr std::array<double, 5> kW = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                               0.2369268850561891, 0.2369268850561891};

  Lemma1Result res{GridFunction(f.grid_ptr(), 1, GridFunction::Tag::Function), 0.0, 2.0 / (2.0 * c - 1.0)};
  double f_sq = 0.0;
  double g_sq = 0.0;
  double s = 0.0;  // int_0^{t_i} f(y) (1-y)^{-c} dy
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = grid[i], b = grid[i + 1];
    const double fi = f(i);
    f_sq += fi * fi * (b - a);
    for (std::size_t q = 0; q < kX.size(); ++q) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * kX[q];
      const double gx = std::pow(1.0 - x, c - 1.0) * (s + fi * power_integral(-c, a, x));
      g_sq += 0.5 * (b - a) * kW[q] * gx * gx;
    }
    s += fi * power_integral(-c, a, b);
    res.g(i + 1) = std::pow(1.0 - b, c - 1.0) * s;
  }
  if (!(f_sq > 0.0)) throw ConfigError("lemma1_g requires ||f|| > 0");
  res.ratio = std::sqrt(g_sq / f_sq);
  return res;
}

std::vector<double> dyadic_eps_list(int first_exponent, int last_exponent) {
  std::vector<double> eps;
  for (int e = first_exponent; e <= last_exponent; ++e) eps.push_back(std::ldexp(1.0, -e));
  return eps;
}

TrendReport tail_quotient_check(const GridFunction& h, std::vector<double> eps_list) {
  if (eps_list.empty()) eps_list = dyadic_eps_list();
  const TimeGrid& grid = h.grid();
  require_eps_within(grid, eps_list);
  const std::size_t n = grid.size();
  std::vector<double> integrand(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double sq = 0.0;
    for (std::size_t d = 0; d < h.dim(); ++d) {
      const double qd = (h(n - 1, d) - h(i, d)) / (1.0 - grid[i]);
      sq += qd * qd;
    }
    integrand[i] = sq;
  }
  // At the last node the difference quotient has no data; continue it from the previous node.
  integrand[n - 1] = integrand[n - 2];
  TrendReport rep = classify_eps_trend(eps_list, integrate_per_eps(grid, integrand, eps_list));
  rep.ordinate_name = "tail_quotient_l2";
  return rep;
}

TrendReport membership_diagnostic(const DriftFamily& fam, const GridFunction& k, std::vector<double> eps_list) {
  const TimeGrid& grid = k.grid();
  require_eps_within(grid, eps_list);
  double scale = 0.0;
  for (double v : k.values()) scale = std::max(scale, std::abs(v));
  for (std::size_t d = 0; d < k.dim(); ++d) {
    if (std::abs(k(0, d)) > 1e-12 * std::max(scale, 1.0)) throw ContractViolation("membership_diagnostic: k(0) != 0");
  }
  std::vector<double> integrand(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double f = drift_coefficient(fam, grid[i]);
    double sq = 0.0;
    for (std::size_t d = 0; d < k.dim(); ++d) sq += k(i, d) * k(i, d);
    integrand[i] = f * f * sq;
  }
  TrendReport rep = classify_eps_trend(eps_list, integrate_per_eps(grid, integrand, eps_list));
  rep.ordinate_name = "drift_times_k_l2";
  return rep;
}

TrendReport subhalf_diagnostic(double c, const GridFunction& hdot, std::vector<double> eps_list) {
  if (!(c > 0.0 && c <= 0.5)) throw DomainError("subhalf_diagnostic requires 0 < c <= 1/2");
  const TimeGrid& grid = hdot.grid();
  require_eps_within(grid, eps_list);
  const std::size_t n = grid.size();
  const std::size_t dim = hdot.dim();
  std::vector<double> inner(dim, 0.0);
  std::vector<double> integrand(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double w0 = std::pow(1.0 - grid[i], -c);
    const double w1 = std::pow(1.0 - grid[i + 1], -c);
    double sq = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      inner[d] += 0.5 * grid.step(i) * (w0 * hdot(i, d) + w1 * hdot(i + 1, d));
      sq += inner[d] * inner[d];
    }
    integrand[i + 1] = std::pow(1.0 - grid[i + 1], 2.0 * c - 2.0) * sq;
  }
  TrendReport rep = classify_eps_trend(eps_list, integrate_per_eps(grid, integrand, eps_list));
  rep.ordinate_name = "subhalf_energy";
  return rep;
}

std::vector<BatteryFunction> h00_battery() {
  std::vector<BatteryFunction> out;
  for (int p = 1; p <= 5; ++p) {
    for (int q = 1; q <= 5; ++q) {
      out.push_back({"t^" + std::to_string(p) + "(1-t)^" + std::to_string(q),
                     [p, q](double t) { return std::pow(t, p) * std::pow(1.0 - t, q); }});
    }
  }
  for (int m = 1; m <= 25; ++m) {
    out.push_back({"sin(" + std::to_string(m) + "pi t)",
                   [m](double t) { return std::sin(m * std::numbers::pi * t); }});
  }
  return out;
}

}  // namespace gbb
