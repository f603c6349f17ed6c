#include "gbb/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "gbb/errors.hpp"
#include "gbb/parallel.hpp"
#include "gbb/quadrature.hpp"
#include "gbb/rng.hpp"

namespace gbb {
namespace {

constexpr std::size_t kChunkPaths = 256;

void require_shape(const GridPtr& grid, std::size_t dim, std::size_t n_paths) {
  if (!grid) throw ConfigError("sampler requires a grid");
  if (dim == 0) throw ConfigError("sampler requires dim >= 1");
  if (n_paths == 0) throw ConfigError("sampler requires n_paths >= 1");
}

// Runs fn(path_index) over all paths in fixed-size chunks.
template <typename Fn>
void for_each_path(std::size_t n_paths, Fn&& fn) {
  const std::size_t chunks = (n_paths + kChunkPaths - 1) / kChunkPaths;
  parallel_for_chunks(chunks, [&](std::size_t chunk) {
    const std::size_t end = std::min(n_paths, (chunk + 1) * kChunkPaths);
    for (std::size_t p = chunk * kChunkPaths; p < end; ++p) fn(p);
  });
}

void require_finite(const PathEnsemble& ens) {
  for (double v : ens.values()) {
    if (!std::isfinite(v)) throw NumericalFailure("sampler produced a non-finite value");
  }
}

}  // namespace

const char* to_string(SamplerKind kind) noexcept {
  switch (kind) {
    case SamplerKind::Exact: return "exact";
    case SamplerKind::EulerMaruyama: return "euler_maruyama";
    case SamplerKind::BrownianBridgeRep: return "bb_representation";
    case SamplerKind::Perturbed: return "perturbed";
  }
  return "unknown";
}

PathEnsemble::PathEnsemble(GridPtr grid, std::size_t dim, std::size_t n_paths, std::uint64_t seed,
                           std::uint64_t first_path, SamplerKind sampler, std::optional<DriftFamily> family)
    : grid_(std::move(grid)),
      dim_(dim),
      n_paths_(n_paths),
      seed_(seed),
      first_path_(first_path),
      sampler_(sampler),
      family_(std::move(family)) {
  require_shape(grid_, dim_, n_paths_);
  values_.assign(n_paths_ * grid_->size() * dim_, 0.0);
}

TransitionTable exact_transitions(const DriftFamily& fam, const TimeGrid& grid) {
  TransitionTable table;
  const std::size_t steps = grid.intervals();
  table.decay.resize(steps);
  table.stddev.resize(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = grid[k];
    const double t1 = grid[k + 1];
    double variance = 0.0;
    if (fam.kind() == DriftFamily::Kind::BridgeC) {
      const double c = fam.c();
      const double log_ratio = std::log1p(-t1) - std::log1p(-t0);  // ln((1-t')/(1-t)) < 0
      table.decay[k] = std::exp(c * log_ratio);
      const double x = 2.0 * c - 1.0;
      // (1-t') [1 - ((1-t')/(1-t))^{2c-1}] / (2c-1), log limit at c = 1/2
      variance = x == 0.0 ? (1.0 - t1) * -log_ratio : (1.0 - t1) * -std::expm1(x * log_ratio) / x;
    } else if (fam.kind() == DriftFamily::Kind::PowerAlpha) {
      const double l0 = log_phi(fam, t0);
      const double l1 = log_phi(fam, t1);
      table.decay[k] = std::exp(l0 - l1);
      // exp(-2 L(t')) int_t^{t'} exp(2 L(s)) ds, kept in the non-overflowing form.
      variance = quad_oracle([&](double s) { return std::exp(2.0 * (log_phi(fam, s) - l1)); }, t0, t1,
                             1e-13 * (t1 - t0));
    } else {
      throw UnsupportedError("sample_exact: perturbed bridge has no explicit solution");
    }
    table.stddev[k] = std::sqrt(std::max(variance, 0.0));
  }
  return table;
}

PathEnsemble sample_exact(const DriftFamily& fam, GridPtr grid, std::size_t dim, std::size_t n_paths,
                          std::uint64_t seed, std::uint64_t first_path) {
  require_shape(grid, dim, n_paths);
  const TransitionTable table = exact_transitions(fam, *grid);
  PathEnsemble ens(grid, dim, n_paths, seed, first_path, SamplerKind::Exact, fam);
  const CounterNormal normal(seed);
  const std::size_t nodes = grid->size();
  for_each_path(n_paths, [&](std::size_t p) {
    auto out = ens.path(p);
    const std::uint64_t id = first_path + p;
    for (std::size_t k = 0; k + 1 < nodes; ++k) {
      for (std::size_t d = 0; d < dim; ++d) {
        out[(k + 1) * dim + d] = table.decay[k] * out[k * dim + d] + table.stddev[k] * normal(id, k + 1, d);
      }
    }
  });
  require_finite(ens);
  return ens;
}

std::size_t em_substeps(const std::function<double(double)>& drift, double t, double dt) {
  std::size_t m = 1;
  const double initial = drift(t) * dt;
  if (initial > 1.0) m = static_cast<std::size_t>(std::ceil(initial));
  // The drift grows inside the step, so check the last sub-step's left point too.
  while (drift(t + dt - dt / static_cast<double>(m)) * (dt / static_cast<double>(m)) > 1.0) {
    m = m + std::max<std::size_t>(1, m / 8);
  }
  return m;
}

namespace {

PathEnsemble run_em(const std::function<double(double)>& drift, GridPtr grid, std::size_t dim, std::size_t n_paths,
                    std::uint64_t seed, std::uint64_t first_path, std::optional<DriftFamily> family) {
  require_shape(grid, dim, n_paths);
  const std::size_t steps = grid->intervals();
  std::vector<std::size_t> substeps(steps);
  for (std::size_t k = 0; k < steps; ++k) substeps[k] = em_substeps(drift, (*grid)[k], grid->step(k));

  PathEnsemble ens(grid, dim, n_paths, seed, first_path, SamplerKind::EulerMaruyama, std::move(family));
  const CounterNormal normal(seed);
  for_each_path(n_paths, [&](std::size_t p) {
    auto out = ens.path(p);
    const std::uint64_t id = first_path + p;
    std::vector<double> z(dim, 0.0);
    for (std::size_t k = 0; k < steps; ++k) {
      const std::size_t m = substeps[k];
      const double h = grid->step(k) / static_cast<double>(m);
      const double sqrt_h = std::sqrt(h);
      for (std::size_t j = 0; j < m; ++j) {
        const double f = drift((*grid)[k] + static_cast<double>(j) * h);
        for (std::size_t d = 0; d < dim; ++d) {
          z[d] += sqrt_h * normal(id, k, j * dim + d) - f * z[d] * h;
        }
      }
      for (std::size_t d = 0; d < dim; ++d) out[(k + 1) * dim + d] = z[d];
    }
  });
  require_finite(ens);
  return ens;
}

}  // namespace

PathEnsemble sample_em(const DriftFamily& fam, GridPtr grid, std::size_t dim, std::size_t n_paths,
                       std::uint64_t seed, std::uint64_t first_path) {
  if (fam.kind() == DriftFamily::Kind::PerturbedBridge) {
    throw UnsupportedError("sample_em: use sample_perturbed for the perturbed bridge");
  }
  return run_em([&fam](double t) { return drift_coefficient(fam, t); }, std::move(grid), dim, n_paths, seed,
                first_path, fam);
}

PathEnsemble sample_em_drift(const std::function<double(double)>& drift, GridPtr grid, std::size_t dim,
                             std::size_t n_paths, std::uint64_t seed, std::uint64_t first_path) {
  return run_em(drift, std::move(grid), dim, n_paths, seed, first_path, std::nullopt);
}

PathEnsemble sample_bb_rep(GridPtr grid, std::size_t dim, std::size_t n_paths, std::uint64_t seed,
                           std::uint64_t first_path) {
  require_shape(grid, dim, n_paths);
  PathEnsemble ens(grid, dim, n_paths, seed, first_path, SamplerKind::BrownianBridgeRep, DriftFamily::bridge(1.0));
  const CounterNormal normal(seed);
  const std::size_t nodes = grid->size();
  for_each_path(n_paths, [&](std::size_t p) {
    auto out = ens.path(p);
    const std::uint64_t id = first_path + p;
    std::vector<double> b(dim, 0.0);
    for (std::size_t k = 0; k + 1 < nodes; ++k) {
      const double sd = std::sqrt(grid->step(k));
      for (std::size_t d = 0; d < dim; ++d) {
        b[d] += sd * normal(id, k, d);
        out[(k + 1) * dim + d] = b[d];
      }
    }
    // Final increment from the last node to t = 1.
    const double sd_last = std::sqrt(1.0 - grid->last());
    for (std::size_t d = 0; d < dim; ++d) {
      const double b1 = b[d] + sd_last * normal(id, nodes - 1, d);
      for (std::size_t k = 1; k < nodes; ++k) out[k * dim + d] -= (*grid)[k] * b1;
    }
  });
  require_finite(ens);
  return ens;
}

PerturbedSample sample_perturbed(const DriftFamily& fam, GridPtr grid, std::size_t dim, std::size_t n_paths,
                                 std::uint64_t seed, std::uint64_t first_path) {
  if (fam.kind() != DriftFamily::Kind::PerturbedBridge) {
    throw UnsupportedError("sample_perturbed: requires a perturbed-bridge family");
  }
  require_shape(grid, dim, n_paths);
  const double delta = fam.delta();
  const double kappa_sq = fam.kappa() * fam.kappa();
  const PerturbationFn& pert = fam.perturbation();
  auto base_drift = [](double t) { return 1.0 / (1.0 - t); };

  const std::size_t steps = grid->intervals();
  std::vector<std::size_t> substeps(steps);
  for (std::size_t k = 0; k < steps; ++k) substeps[k] = em_substeps(base_drift, (*grid)[k], grid->step(k));

  PerturbedSample out{PathEnsemble(grid, dim, n_paths, seed, first_path, SamplerKind::Perturbed, fam),
                      PathEnsemble(grid, dim, n_paths, seed, first_path, SamplerKind::EulerMaruyama,
                                   DriftFamily::bridge(1.0)),
                      std::vector<double>(n_paths * grid->size(), 0.0)};
  const CounterNormal normal(seed);

  auto check_bound = [&](double t, std::span<const double> x, std::span<const double> fx) {
    double x_sq = 0.0;
    double f_sq = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      x_sq += x[d] * x[d];
      f_sq += fx[d] * fx[d];
    }
    const double bound = kappa_sq * x_sq + kappa_sq;
    if (!(f_sq <= bound * (1.0 + 1e-12) + 1e-300)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "perturbation violates |f(t,x)|^2 <= kappa^2 |x|^2 + kappa^2 at t = " << t << ", x = (";
      for (std::size_t d = 0; d < dim; ++d) msg << (d ? ", " : "") << x[d];
      msg << "): |f|^2 = " << f_sq << " > " << bound;
      throw ContractViolation(msg.str());
    }
  };

  for_each_path(n_paths, [&](std::size_t p) {
    auto xs = out.paths.path(p);
    auto zs = out.base.path(p);
    double* log_inc = out.log_rn_increments.data() + p * grid->size();
    const std::uint64_t id = first_path + p;
    std::vector<double> x(dim, 0.0), z(dim, 0.0), fx(dim), fz(dim), db(dim);
    for (std::size_t k = 0; k < steps; ++k) {
      const std::size_t m = substeps[k];
      const double h = grid->step(k) / static_cast<double>(m);
      const double sqrt_h = std::sqrt(h);
      double increment = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double t = (*grid)[k] + static_cast<double>(j) * h;
        const double base = base_drift(t);
        const double damp = std::pow(1.0 - t, -delta);
        pert(t, x, fx);
        check_bound(t, x, fx);
        pert(t, z, fz);
        check_bound(t, z, fz);
        double f_sq = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
          db[d] = sqrt_h * normal(id, k, j * dim + d);
          const double g = fz[d] * damp;
          increment += g * db[d];
          f_sq += g * g;
          x[d] += db[d] - base * x[d] * h + fx[d] * damp * h;
          z[d] += db[d] - base * z[d] * h;
        }
        increment -= 0.5 * f_sq * h;
      }
      for (std::size_t d = 0; d < dim; ++d) {
        xs[(k + 1) * dim + d] = x[d];
        zs[(k + 1) * dim + d] = z[d];
      }
      log_inc[k + 1] = increment;
    }
  });
  require_finite(out.paths);
  require_finite(out.base);
  return out;
}

SupNormStats sup_norm_stats(const PathEnsemble& ens, double a) {
  const std::size_t n = ens.n_paths();
  const std::size_t dim = ens.dim();
  std::vector<double> sup(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    double best = 0.0;
    for (std::size_t k = 0; k < ens.n_nodes(); ++k) {
      double sq = 0.0;
      for (std::size_t d = 0; d < dim; ++d) sq += ens.at(p, k, d) * ens.at(p, k, d);
      best = std::max(best, sq);
    }
    sup[p] = std::sqrt(best);
  }
  auto mean_se = [n](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
    return std::pair{mean, std::sqrt(var / static_cast<double>(n))};
  };
  SupNormStats stats;
  std::tie(stats.mean_sup, stats.se_sup) = mean_se(sup);
  std::vector<double> moment(n);
  for (std::size_t p = 0; p < n; ++p) moment[p] = a == 0.0 ? 1.0 : std::exp(a * sup[p] * sup[p]);
  std::tie(stats.exp_moment, stats.se_exp_moment) = mean_se(moment);
  stats.exp_moment_warning = a >= 0.125;
  return stats;
}

}  // namespace gbb
