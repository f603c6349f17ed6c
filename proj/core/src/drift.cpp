#include "gbb/drift.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "gbb/errors.hpp"

namespace gbb {
namespace {

void require_time(double t, const char* what) {
  if (!(t >= 0.0 && t < 1.0)) {
    std::ostringstream msg;
    msg << what << ": time " << t << " outside [0, 1)";
    throw DomainError(msg.str());
  }
}

void require_deterministic(const DriftFamily& fam, const char* what) {
  if (fam.kind() == DriftFamily::Kind::PerturbedBridge) {
    throw UnsupportedError(std::string(what) + ": perturbed drift is state dependent (use the perturbed sampler)");
  }
}

}  // namespace

DriftFamily DriftFamily::bridge(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("bridge family requires c > 0");
  DriftFamily fam;
  fam.kind_ = Kind::BridgeC;
  fam.c_ = c;
  return fam;
}

DriftFamily DriftFamily::power(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw ConfigError("power family requires alpha > 1");
  DriftFamily fam;
  fam.kind_ = Kind::PowerAlpha;
  fam.alpha_ = alpha;
  return fam;
}

DriftFamily DriftFamily::perturbed(double delta, double kappa, PerturbationFn pert) {
  if (!(delta > 0.0 && delta < 0.5)) throw ConfigError("perturbed family requires 0 < delta < 1/2");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("perturbed family requires kappa >= 0");
  if (kappa * kappa > (1.0 - 2.0 * delta) / 4.0) {
    throw ConfigError("perturbed family requires kappa^2 <= (1 - 2 delta)/4");
  }
  if (!pert) throw ConfigError("perturbed family requires a perturbation function");
  DriftFamily fam;
  fam.kind_ = Kind::PerturbedBridge;
  fam.c_ = 1.0;
  fam.delta_ = delta;
  fam.kappa_ = kappa;
  fam.pert_ = std::move(pert);
  return fam;
}

DriftFamily DriftFamily::perturbed_tanh(double delta, double kappa) {
  return perturbed(delta, kappa, [kappa](double, std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = kappa * std::tanh(x[i]);
  });
}

std::string DriftFamily::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::BridgeC: os << "bridge(c=" << c_ << ")"; break;
    case Kind::PowerAlpha: os << "power(alpha=" << alpha_ << ")"; break;
    case Kind::PerturbedBridge: os << "perturbed(delta=" << delta_ << ",kappa=" << kappa_ << ")"; break;
  }
  return os.str();
}

double drift_coefficient(const DriftFamily& fam, double t) {
  require_deterministic(fam, "drift_coefficient");
  require_time(t, "drift_coefficient");
  if (fam.kind() == DriftFamily::Kind::BridgeC) return fam.c() / (1.0 - t);
  return std::pow(1.0 - t, -fam.alpha());
}

double log_phi(const DriftFamily& fam, double t) {
  require_deterministic(fam, "log_phi");
  require_time(t, "log_phi");
  if (fam.kind() == DriftFamily::Kind::BridgeC) return -fam.c() * std::log1p(-t);
  // ((1-t)^(1-alpha) - 1) / (alpha - 1), written with expm1 for small t.
  const double a1 = fam.alpha() - 1.0;
  return std::expm1(-a1 * std::log1p(-t)) / a1;
}

double aii_kernel(const DriftFamily& fam, double s, double t) {
  require_time(t, "aii_kernel");
  if (!(s >= 0.0 && s <= t)) throw DomainError("aii_kernel: requires 0 <= s <= t");
  return drift_coefficient(fam, s) * std::exp(log_phi(fam, s) - log_phi(fam, t));
}

double aii_mass(const DriftFamily& fam, double t) {
  return -std::expm1(-log_phi(fam, t));
}

double aii_mass(const DriftFamily& fam, double t, double t0) {
  require_time(t, "aii_mass");
  if (!(t0 >= 0.0 && t0 <= t)) throw DomainError("aii_mass: requires 0 <= t0 <= t");
  const double lt = log_phi(fam, t);
  const double lt0 = log_phi(fam, t0);
  // exp(-L(t)) (exp(L(t0)) - 1)
  return std::exp(lt0 - lt) * -std::expm1(-lt0);
}

}  // namespace gbb
