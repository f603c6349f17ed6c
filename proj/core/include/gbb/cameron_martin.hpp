#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gbb/drift.hpp"
#include "gbb/grid.hpp"
#include "gbb/trend.hpp"

namespace gbb {

/// k = T(hdot): k(t) = exp(-L(t)) int_0^t exp(L(s)) hdot(s) ds with L = log_phi.
///
/// Integrated by the exact-factor trapezoid recursion
///   k_{j+1} = a_j k_j + dt_j/2 (a_j hdot_j + hdot_{j+1}),  a_j = exp(L_j - L_{j+1}),
/// which is second order, so T^{-1} T stays within 1e-3 on fine grids.
/// hdot must carry the Derivative tag.
GridFunction apply_T(const DriftFamily& fam, const GridFunction& hdot);

/// hdot = T^{-1}(k) = k' + f k, with k' from three-point differences
/// (centered on the nonuniform interior, one-sided at both ends).
GridFunction apply_T_inv(const DriftFamily& fam, const GridFunction& k);

struct Lemma1Result {
  GridFunction g;
  double ratio = 0.0;  ///< ||g|| / ||f||
  double bound = 0.0;  ///< 2 / (2c - 1)
};

/// g(x) = (1-x)^{c-1} int_0^x f(y) (1-y)^{-c} dy for f piecewise constant
/// (value f(t_i) on [t_i, t_{i+1})). The inner integral is exact per cell and
/// ||g||_{L2} over [0, last node] uses 5-point Gauss-Legendre per cell.
/// DomainError unless c > 1/2; ConfigError when ||f|| = 0.
Lemma1Result lemma1_g(double c, const GridFunction& f);

/// I(eps) = int_0^{1-eps} ((h(1) - h(u)) / (1-u))^2 du, with h(1) taken as the
/// value at the last node. Every 1 - eps must lie within the grid.
TrendReport tail_quotient_check(const GridFunction& h, std::vector<double> eps_list = {});

/// Default eps list 2^-3, ..., 2^-14.
std::vector<double> dyadic_eps_list(int first_exponent = 3, int last_exponent = 14);

/// I(eps) = int_0^{1-eps} |f(t) k(t)|^2 dt (trapezoid on the grid of k).
/// ContractViolation when k(0) != 0.
TrendReport membership_diagnostic(const DriftFamily& fam, const GridFunction& k, std::vector<double> eps_list);

/// J(eps) = int_0^{1-eps} (1-t)^{2c-2} |int_0^t hdot(s) (1-s)^{-c} ds|^2 dt for 0 < c <= 1/2.
TrendReport subhalf_diagnostic(double c, const GridFunction& hdot, std::vector<double> eps_list);

struct BatteryFunction {
  std::string name;
  std::function<double(double)> fn;
};

/// 50 functions vanishing at t = 0 and t = 1: t^p (1-t)^q for p, q in 1..5 and
/// sin(m pi t) for m = 1..25.
std::vector<BatteryFunction> h00_battery();

}  // namespace gbb
