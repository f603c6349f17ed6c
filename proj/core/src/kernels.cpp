#include "gbb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gbb/errors.hpp"
#include "gbb/quadrature.hpp"

namespace gbb {
namespace {

void require_args(const char* what, double c, double s, double t) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError(std::string(what) + ": requires c > 0");
  }
  if (!(s >= 0.0 && s < 1.0 && t >= 0.0 && t < 1.0)) {
    std::ostringstream msg;
    msg << what << ": arguments (" << s << ", " << t << ") outside [0, 1)";
    throw DomainError(msg.str());
  }
}

// int_0^m (1-r)^{-2c} dr = ((1-m)^{1-2c} - 1) / (2c - 1), with the log limit at c = 1/2.
double inverse_power_integral(double c, double m) {
  const double x = 1.0 - 2.0 * c;
  const double log_rest = std::log1p(-m);
  if (x == 0.0) return -log_rest;
  return std::expm1(x * log_rest) / -x;
}

}  // namespace

const char* to_string(KernelMethod m) noexcept {
  return m == KernelMethod::ClosedForm ? "closed_form" : "quadrature";
}

double cov_Q(double c, double s, double t) {
  require_args("cov_Q", c, s, t);
  const double m = std::min(s, t);
  return std::pow((1.0 - t) * (1.0 - s), c) * inverse_power_integral(c, m);
}

double cov_Q_integral(double c, double s, double t, double tol) {
  require_args("cov_Q_integral", c, s, t);
  const double m = std::min(s, t);
  const double scale = std::pow((1.0 - t) * (1.0 - s), c);
  return quad_oracle([&](double r) { return scale * std::pow(1.0 - r, -2.0 * c); }, 0.0, m, tol);
}

double fh_kernel_q_integral(double c, double s, double t, double tol) {
  require_args("fh_kernel_q_integral", c, s, t);
  const double m = std::min(s, t);
  const double big = std::max(s, t);
  const double inner = quad_oracle([c](double r) { return std::pow(1.0 - r, -2.0 * c); }, 0.0, m, tol);
  return -c * std::pow(1.0 - big, c - 1.0) / std::pow(1.0 - m, c) +
         c * c * (std::pow(1.0 - t, c - 1.0) * std::pow(1.0 - s, c - 1.0)) * inner;
}

KernelValue fh_kernel_q_eval(double c, double s, double t) {
  require_args("fh_kernel_q", c, s, t);
  if (c == 1.0) return {-1.0, KernelMethod::ClosedForm};
  if (std::abs(2.0 * c - 1.0) < kHalfExclusion) {
    return {fh_kernel_q_integral(c, s, t), KernelMethod::Quadrature};
  }
  const double m = std::min(s, t);
  const double big = std::max(s, t);
  const double d = 2.0 * c - 1.0;
  const double first = c * (1.0 - c) / d * std::pow(1.0 - big, c - 1.0) / std::pow(1.0 - m, c);
  // Product first so that swapping s and t gives a bitwise-identical value.
  const double both = std::pow(1.0 - t, c - 1.0) * std::pow(1.0 - s, c - 1.0);
  const double second = c * c / d * both;
  return {first - second, KernelMethod::ClosedForm};
}

double fh_kernel_q(double c, double s, double t) { return fh_kernel_q_eval(c, s, t).value; }

}  // namespace gbb
