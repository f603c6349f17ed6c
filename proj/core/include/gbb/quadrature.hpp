#pragma once

#include <cstddef>
#include <functional>

namespace gbb {

/// Scalar integrand for the quadrature oracle.
using Integrand = std::function<double(double)>;

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int max_depth = 60;
  std::size_t max_panels = 200000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t panels = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature over [a, b].
///
/// Panels are bisected largest-error-first until the summed Kronrod-Gauss
/// error estimate drops below `opts.abs_tol`. The result is a deterministic
/// function of the inputs. Throws OracleFailure when a panel that still needs
/// refinement sits at `max_depth`, when the panel budget runs out, or when the
/// integrand returns a non-finite value; DomainError when a > b.
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& opts = {});

/// Convenience wrapper returning only the value.
double quad_oracle(const Integrand& f, double a, double b, double tol = 1e-10);

}  // namespace gbb
