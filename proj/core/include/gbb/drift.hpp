#pragma once

#include <functional>
#include <span>
#include <string>

namespace gbb {

/// State-dependent perturbation f(t, x) written into `out` (same length as x).
using PerturbationFn = std::function<void(double t, std::span<const double> x, std::span<double> out)>;

/// Drift coefficient f(t) of dz = dB - f(t) z dt, with f blowing up at t = 1.
///
/// Three families are supported:
///  - BridgeC:          f(t) = c / (1 - t),          c > 0
///  - PowerAlpha:       f(t) = (1 - t)^(-alpha),     alpha > 1
///  - PerturbedBridge:  base drift 1/(1-t) plus the state-dependent term
///                      pert(t, x) / (1 - t)^delta, 0 < delta < 1/2, with the
///                      growth bound |pert|^2 <= kappa^2 |x|^2 + kappa^2 and
///                      kappa^2 <= (1 - 2 delta) / 4.
///
/// Construct through the named factories; they validate the invariants and
/// throw ConfigError otherwise.
class DriftFamily {
public:
  enum class Kind { BridgeC, PowerAlpha, PerturbedBridge };

  static DriftFamily bridge(double c);
  static DriftFamily power(double alpha);
  static DriftFamily perturbed(double delta, double kappa, PerturbationFn pert);
  /// kappa * tanh(x) componentwise; satisfies the growth bound for any kappa.
  static DriftFamily perturbed_tanh(double delta, double kappa);

  Kind kind() const noexcept { return kind_; }
  /// Drift scale c (1 for PerturbedBridge, whose base is the classical bridge).
  double c() const noexcept { return c_; }
  double alpha() const noexcept { return alpha_; }
  double delta() const noexcept { return delta_; }
  double kappa() const noexcept { return kappa_; }
  const PerturbationFn& perturbation() const noexcept { return pert_; }

  std::string describe() const;

private:
  DriftFamily() = default;

  Kind kind_ = Kind::BridgeC;
  double c_ = 1.0;
  double alpha_ = 0.0;
  double delta_ = 0.0;
  double kappa_ = 0.0;
  PerturbationFn pert_;
};

/// f(t) for BridgeC / PowerAlpha. DomainError unless 0 <= t < 1;
/// UnsupportedError for PerturbedBridge.
double drift_coefficient(const DriftFamily& fam, double t);

/// Exponent of the integrating factor, int_0^t f(s) ds.
double log_phi(const DriftFamily& fam, double t);

/// Approximation-to-the-identity kernel G_f(s,t) = f(s) exp(-int_s^t f). Requires 0 <= s <= t < 1.
double aii_kernel(const DriftFamily& fam, double s, double t);

/// int_0^{t0} G_f(s,t) ds; the full mass 1 - exp(-log_phi(t)) when t0 is omitted.
double aii_mass(const DriftFamily& fam, double t);
double aii_mass(const DriftFamily& fam, double t, double t0);

}  // namespace gbb
