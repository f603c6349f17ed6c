#pragma once

namespace gbb {

/// How a kernel value was obtained.
enum class KernelMethod { ClosedForm, Quadrature };

struct KernelValue {
  double value = 0.0;
  KernelMethod method = KernelMethod::ClosedForm;
};

const char* to_string(KernelMethod m) noexcept;

/// Covariance of the c-bridge, Q_c(s,t) = int_0^{s^t} (1-t)^c (1-s)^c / (1-r)^{2c} dr.
///
/// Evaluated in closed form for every c > 0; the c = 1/2 logarithmic case is
/// the continuous limit of the same expression. Requires s, t in [0, 1).
double cov_Q(double c, double s, double t);

/// Kernel q_c(s,t) of A^{-1} R_c (A^*)^{-1} - I:
///   q_c = -c (1-s v t)^{c-1} / (1-s ^ t)^c
///         + c^2 (1-t)^{c-1} (1-s)^{c-1} int_0^{s^t} (1-r)^{-2c} dr.
///
/// Closed form when |2c - 1| >= 1e-3, integral form with the inner integral
/// from the quadrature oracle otherwise. q_1 is exactly -1.
double fh_kernel_q(double c, double s, double t);
KernelValue fh_kernel_q_eval(double c, double s, double t);

/// Integral form of q_c with the inner integral computed by quadrature.
/// Independent of the closed form; used as its cross-check.
double fh_kernel_q_integral(double c, double s, double t, double tol = 1e-12);

/// Integral form of Q_c by quadrature, the cross-check for cov_Q.
double cov_Q_integral(double c, double s, double t, double tol = 1e-12);

/// Below this distance from c = 1/2 the closed form of q_c is refused.
inline constexpr double kHalfExclusion = 1e-3;

}  // namespace gbb
