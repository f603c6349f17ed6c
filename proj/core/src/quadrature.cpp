#include "gbb/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "gbb/errors.hpp"

namespace gbb {
namespace {

// Kronrod 15-point abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-indexed nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  int depth;
  std::size_t order;  // creation order, for deterministic tie-breaking
};

struct PanelLess {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.order > y.order;
  }
};

double checked(const Integrand& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw OracleFailure("quadrature: integrand is not finite at x = " + std::to_string(x));
  }
  return v;
}

Panel evaluate(const Integrand& f, double a, double b, int depth, std::size_t order) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = checked(f, center - dx) + checked(f, center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return Panel{a, b, kronrod, std::abs(kronrod - gauss), depth, order};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& opts) {
  if (!(a <= b)) throw DomainError("quadrature: requires a <= b");
  if (!(opts.abs_tol > 0.0)) throw DomainError("quadrature: tolerance must be positive");
  if (a == b) return {0.0, 0.0, 0};

  std::priority_queue<Panel, std::vector<Panel>, PanelLess> heap;
  std::size_t order = 0;
  Panel root = evaluate(f, a, b, 0, order++);
  double total = root.value;
  double error = root.error;
  heap.push(root);

  // Absolute tolerance, floored at double-precision roundoff of the running total.
  auto converged = [&] { return error <= std::max(opts.abs_tol, 1e-14 * std::abs(total)); };
  while (!converged()) {
    Panel worst = heap.top();
    if (worst.depth >= opts.max_depth) {
      throw OracleFailure("quadrature: depth limit reached near x = " + std::to_string(worst.a) +
                          " (error estimate " + std::to_string(error) + ")");
    }
    if (heap.size() >= opts.max_panels) {
      throw OracleFailure("quadrature: panel budget exhausted (error estimate " + std::to_string(error) + ")");
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate(f, worst.a, mid, worst.depth + 1, order++);
    Panel right = evaluate(f, mid, worst.b, worst.depth + 1, order++);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (converged()) {
      // Re-sum to drop drift from the incremental updates.
      auto copy = heap;
      total = 0.0;
      error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  return {total, error, heap.size()};
}

double quad_oracle(const Integrand& f, double a, double b, double tol) {
  QuadratureOptions opts;
  opts.abs_tol = tol;
  return integrate(f, a, b, opts).value;
}

}  // namespace gbb
