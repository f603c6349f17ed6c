// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the number
// of failing criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gbb/cameron_martin.hpp"
#include "gbb/drift.hpp"
#include "gbb/feldman_hajek.hpp"
#include "gbb/girsanov.hpp"
#include "gbb/grid.hpp"
#include "gbb/kernels.hpp"
#include "gbb/sampler.hpp"
#include "gbb_cli/cli.hpp"

namespace {

using namespace gbb;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// 1 -------------------------------------------------------------------------
Outcome kernel_closed_forms() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> uc(0.2, 3.0), ut(0.0, 0.99);
  double worst_q = 0.0, worst_cov = 0.0;
  int done = 0;
  while (done < 200) {
    const double c = uc(rng);
    if (std::abs(c - 0.5) <= 1e-3) continue;
    const double s = ut(rng), t = ut(rng);
    const double cq = cov_Q(c, s, t), cq_o = cov_Q_integral(c, s, t);
    const double q = fh_kernel_q(c, s, t), q_o = fh_kernel_q_integral(c, s, t);
    worst_cov = std::max(worst_cov, std::abs(cq - cq_o) / std::abs(cq_o));
    worst_q = std::max(worst_q, std::abs(q - q_o) / std::abs(q_o));
    ++done;
  }
  return {worst_cov <= 1e-8 && worst_q <= 1e-8,
          fmt("max rel err cov_Q %.2e, q_c %.2e over 200 draws", worst_cov, worst_q)};
}

// 2 -------------------------------------------------------------------------
Outcome c1_collapse() {
  const GridPtr grid = make_grid(GridKind::Uniform, 100, 0.01);
  double dev_cov = 0.0, dev_q = 0.0;
  for (double s : grid->nodes()) {
    for (double t : grid->nodes()) {
      dev_cov = std::max(dev_cov, std::abs(cov_Q(1.0, s, t) - (std::min(s, t) - s * t)));
      dev_q = std::max(dev_q, std::abs(fh_kernel_q(1.0, s, t) + 1.0));
    }
  }
  return {dev_cov <= 1e-12 && dev_q <= 1e-12, fmt("101x101: max |Q_1 - (s^t - st)| %.2e, max |q_1 + 1| %.2e", dev_cov, dev_q)};
}

// 3 -------------------------------------------------------------------------
Outcome exact_marginals() {
  const GridPtr grid = make_grid(GridKind::Uniform, 396, 0.01);
  const std::vector<double> ts = {0.25, 0.5, 0.75};
  const std::size_t n_paths = 100000, chunk = 10000;
  bool ok = true;
  double worst_z = 0.0;
  for (double c : {0.75, 1.0, 2.0}) {
    const DriftFamily fam = DriftFamily::bridge(c);
    std::vector<double> s1(ts.size(), 0.0), s2(ts.size(), 0.0), s4(ts.size(), 0.0);
    for (std::size_t first = 0; first < n_paths; first += chunk) {
      const PathEnsemble ens = sample_exact(fam, grid, 1, chunk, 11, first);
      for (std::size_t j = 0; j < ts.size(); ++j) {
        const std::size_t k = grid->index_of(ts[j]);
        for (std::size_t p = 0; p < chunk; ++p) {
          const double x = ens.at(p, k);
          s1[j] += x;
          s2[j] += x * x;
          s4[j] += x * x * x * x;
        }
      }
    }
    const double n = static_cast<double>(n_paths);
    for (std::size_t j = 0; j < ts.size(); ++j) {
      const double mean = s1[j] / n;
      const double var = (s2[j] - n * mean * mean) / (n - 1.0);
      const double se = std::sqrt((s4[j] / n - (s2[j] / n) * (s2[j] / n)) / n);
      const double z = std::abs(var - cov_Q(c, ts[j], ts[j])) / se;
      worst_z = std::max(worst_z, z);
      ok = ok && z <= 3.0;
    }
  }
  return {ok, fmt("worst |var - Q_c(t,t)| = %.2f SE (9 checks, 1e5 paths)", worst_z)};
}

// 4 -------------------------------------------------------------------------
Outcome lemma_bound() {
  std::mt19937_64 rng(4242);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_margin = -INFINITY;
  std::size_t count = 0;
  for (double c : {0.6, 0.75, 1.0, 2.0}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto kind = trial % 3;
      const std::size_t n = 64 + static_cast<std::size_t>(unit(rng) * 448);
      const GridPtr grid = make_grid(trial % 2 ? GridKind::Geometric : GridKind::Uniform, n,
                                     std::pow(10.0, -2.0 - 4.0 * unit(rng)));
      const double beta = 0.45 * unit(rng);
      GridFunction f(grid, 1, GridFunction::Tag::Function);
      for (std::size_t i = 0; i < grid->size(); ++i) {
        const double t = (*grid)[i];
        if (kind == 0) f(i) = normal(rng);
        else if (kind == 1) f(i) = std::pow(1.0 - t, -beta) * (1.0 + 0.2 * normal(rng));
        else f(i) = std::cos(3.0 * t + normal(rng) * 0.1) + normal(rng) * 0.1;
      }
      const Lemma1Result r = lemma1_g(c, f);
      worst_margin = std::max(worst_margin, r.ratio - r.bound);
      ++count;
    }
  }
  return {worst_margin <= 1e-2, fmt("%g instances, max ratio - 2/(2c-1) = %.3f", static_cast<double>(count), worst_margin)};
}

// 5 -------------------------------------------------------------------------
Outcome cm_round_trip() {
  const GridPtr grid = make_grid(GridKind::Geometric, 4095, 1e-2);
  std::mt19937_64 rng(55);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    double a[4], b[4];
    for (int j = 0; j < 4; ++j) {
      a[j] = normal(rng);
      b[j] = normal(rng);
    }
    const GridFunction hdot = GridFunction::sample(
        grid,
        [&](double t) {
          double v = a[0];
          for (int j = 1; j < 4; ++j) v += a[j] * std::cos(j * std::numbers::pi * t) + b[j] * std::sin(j * std::numbers::pi * t);
          return v;
        },
        GridFunction::Tag::Derivative);
    for (double c : {0.75, 1.0, 2.0}) {
      const DriftFamily fam = DriftFamily::bridge(c);
      const GridFunction back = apply_T_inv(fam, apply_T(fam, hdot));
      std::vector<double> diff(grid->size());
      for (std::size_t i = 0; i < grid->size(); ++i) diff[i] = back(i) - hdot(i);
      const double err = GridFunction(grid, diff, 1, GridFunction::Tag::Derivative).l2_norm() / hdot.l2_norm();
      worst = std::max(worst, err);
    }
  }
  return {worst <= 1e-3, fmt("max relative L2 error %.2e (100 inputs x c in {0.75,1,2})", worst)};
}

// 6 -------------------------------------------------------------------------
Outcome power_witness() {
  const GridPtr grid = make_grid(GridKind::Geometric, 4096, std::ldexp(1.0, -14));
  const GridFunction k =
      GridFunction::sample(grid, [](double t) { return t * std::pow(1.0 - t, 0.6); }, GridFunction::Tag::Function);
  const TrendReport r = membership_diagnostic(DriftFamily::power(2.0), k, dyadic_eps_list());
  const double target = std::pow(2.0, 1.8);
  const bool ok = std::abs(r.last_ratio / target - 1.0) <= 0.1 && r.verdict == Verdict::Divergent;
  return {ok, fmt("doubling ratio %.4f (target %.4f), slope %.3f, verdict ", r.last_ratio, target, r.slope) +
                  to_string(r.verdict)};
}

// 7 -------------------------------------------------------------------------
Outcome claim_b() {
  const GridPtr grid = make_grid(GridKind::Geometric, 4096, std::ldexp(1.0, -14));
  const std::vector<double> eps = dyadic_eps_list();
  int bounded = 0, total = 0;
  std::string first_bad;
  for (double c : {0.6, 0.75, 2.0}) {
    const DriftFamily fam = DriftFamily::bridge(c);
    for (const auto& item : h00_battery()) {
      const TrendReport r =
          membership_diagnostic(fam, GridFunction::sample(grid, item.fn, GridFunction::Tag::Function), eps);
      ++total;
      if (r.verdict == Verdict::Bounded) ++bounded;
      else if (first_bad.empty()) first_bad = item.name + "@c=" + fmt("%g", c);
    }
  }
  const GridFunction one = GridFunction::sample(grid, [](double) { return 1.0; }, GridFunction::Tag::Derivative);
  const TrendReport q = subhalf_diagnostic(0.25, one, eps);
  const TrendReport h = subhalf_diagnostic(0.5, one, eps);
  const bool ok = bounded == total && q.verdict == Verdict::Divergent && h.verdict == Verdict::Divergent;
  std::string detail = fmt("battery bounded %g/%g; subhalf c=0.25 slope %.3f ", bounded, total, q.slope) +
                       to_string(q.verdict) + fmt(", c=0.5 slope %.3f ", h.slope) + to_string(h.verdict);
  if (!first_bad.empty()) detail += "; first non-bounded " + first_bad;
  return {ok, detail};
}

// 8 -------------------------------------------------------------------------
Outcome claim_c() {
  const std::vector<std::size_t> ns = {64, 128, 256, 512, 1024};
  bool ok = true;
  std::string detail;
  auto strictly_increasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] > v[i - 1])) return false;
    }
    return true;
  };
  for (double c : {0.8, 1.5}) {
    const TrendReport hs = hs_trend(c, ns);
    const TrendReport kl = kl_trend(c, ns);
    const bool good = hs.verdict == Verdict::Divergent && strictly_increasing(kl.ordinates);
    ok = ok && good;
    detail += fmt("c=%g HS %.3g->%.3g ", c, hs.ordinates.front(), hs.ordinates.back()) + to_string(hs.verdict) +
              fmt(", KL %.3g->%.3g; ", kl.ordinates.front(), kl.ordinates.back());
  }
  {
    const TrendReport hs = hs_trend(1.0, ns);
    const TrendReport kl = kl_trend(1.0, ns);
    const double worst = std::max(*std::max_element(hs.ordinates.begin(), hs.ordinates.end()),
                                  *std::max_element(kl.ordinates.begin(), kl.ordinates.end()));
    const bool good = hs.verdict == Verdict::Bounded && worst <= 1e-6;
    ok = ok && good;
    detail += fmt("c=1 max(HS,KL) %.2e; ", worst);
  }
  const TrendReport q075 = qc_l2_trend(0.75);
  const TrendReport q15 = qc_l2_trend(1.5);
  const TrendReport q1 = qc_l2_trend(1.0);
  const bool s075 = std::abs(q075.slope / 0.5625 - 1.0) <= 0.15;
  const bool s15 = std::abs(q15.slope / 0.140625 - 1.0) <= 0.15;
  const bool s1 = q1.slope <= 1e-10;
  ok = ok && s075 && s15 && s1;
  detail += fmt("qc slopes %.4f (0.5625), %.4f (0.1406), ", q075.slope, q15.slope) + fmt("c=1 %.2e (<= 1e-10)", q1.slope);
  return {ok, detail};
}

// 9 -------------------------------------------------------------------------
Outcome remark_24() {
  const GridPtr grid = make_grid(GridKind::Geometric, 1024, 1e-4);
  const std::vector<double> ts = {0.9, 0.99, 0.999, 0.9999};
  const MartingaleTrace trace = run_bridge_girsanov(0.8, grid, 1, 100000, 9, ts);
  const DiagnosticsReport rep = martingale_summary(trace, ts);
  bool means_ok = true;
  double worst_z = 0.0;
  bool decreasing = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const double z = std::abs(rep.rows[i].mean - 1.0) / rep.rows[i].se;
    worst_z = std::max(worst_z, z);
    means_ok = means_ok && z <= 3.0;
    if (i > 0) decreasing = decreasing && rep.rows[i].median < rep.rows[i - 1].median;
  }
  const MartingaleRow& last = rep.rows.back();
  const bool ok = means_ok && last.median < kCollapseMedian && last.mass_collapse;
  std::string detail = fmt("worst |mean-1| %.2f SE; median M_t %.4f -> %.4f", worst_z, rep.rows.front().median, last.median) +
                       (decreasing ? " (decreasing)" : " (not decreasing)") + fmt("; need < %.2f", kCollapseMedian) +
                       (last.mass_collapse ? ", mass-collapse flagged" : ", mass-collapse not flagged");
  return {ok, detail};
}

// 10 ------------------------------------------------------------------------
Outcome example_26() {
  const GridPtr grid = make_grid(GridKind::Geometric, 1024, 1e-4);
  const std::vector<double> ts = {0.9, 0.99, 0.999, 0.9999};
  const DriftFamily fam = DriftFamily::perturbed_tanh(0.25, 0.35);
  const MartingaleTrace trace = run_perturbed_girsanov(fam, grid, 1, 100000, 10, ts);
  const DiagnosticsReport rep = martingale_summary(trace, ts);
  const MartingaleRow& last = rep.rows.back();
  const double z = std::abs(last.mean - 1.0) / last.se;
  const std::vector<double> l2_all = log_density_l2(trace);
  std::vector<double> l2;
  for (double t : {0.9, 0.99, 0.999}) l2.push_back(l2_all[trace.position(t)]);
  bool l2_ok = true;
  double worst_ratio = 0.0;
  for (std::size_t i = 1; i < l2.size(); ++i) {
    const double ratio = l2[i] / l2[i - 1];
    worst_ratio = std::max(worst_ratio, ratio);
    l2_ok = l2_ok && ratio >= 1.0 && ratio <= 1.2;
  }
  const double nov = novikov_bound(0.25, 0.35, 4.0);
  const bool nov_ok = std::abs(nov - std::exp(0.6125)) <= 1e-12;
  const bool ok = z <= 3.0 && last.median >= kMedianFloor && l2_ok && nov_ok && !last.mass_collapse;
  return {ok, fmt("|mean-1| %.2f SE, median %.4f, ", z, last.median) +
                  fmt("L2 ratios max %.4f, novikov err %.1e", worst_ratio, std::abs(nov - std::exp(0.6125)))};
}

// 11 ------------------------------------------------------------------------
Outcome operator_algebra() {
  const std::vector<std::size_t> ns = {128, 256, 512};
  std::vector<double> r_dev, q075, q2;
  double q1 = 0.0;
  for (std::size_t n : ns) {
    const GridPtr grid = make_grid(GridKind::Geometric, n, 1e-3);
    r_dev.push_back(r_factorization_deviation(*grid));
    q075.push_back(discrete_q_consistency(0.75, *grid).max_rel_deviation);
    q2.push_back(discrete_q_consistency(2.0, *grid).max_rel_deviation);
    q1 = std::max(q1, discrete_q_consistency(1.0, *grid).max_rel_deviation);
  }
  auto halves = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      const double ratio = v[i - 1] / v[i];
      if (!(ratio >= 1.8 && ratio <= 2.2)) return false;
    }
    return true;
  };
  const bool ok = halves(r_dev) && halves(q075) && halves(q2) && q075.back() <= 5e-2 && q1 <= 1e-2;
  return {ok, fmt("R=AA* dev %.2e/%.2e/%.2e; ", r_dev[0], r_dev[1], r_dev[2]) +
                  fmt("q dev c=0.75 %.3g/%.3g/%.3g; ", q075[0], q075[1], q075[2]) +
                  fmt("c=2 %.3g/%.3g/%.3g; ", q2[0], q2[1], q2[2]) + fmt("c=1 %.1e", q1)};
}

// 12 ------------------------------------------------------------------------
std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism() {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "gbb_acceptance_determinism";
  std::filesystem::create_directories(dir);
  const std::vector<std::vector<std::string>> runs = {
      {"sample", "--family", "bridge", "--c", "1", "--grid", "geometric", "--n", "512", "--eps-min", "1e-4", "--paths",
       "1000", "--seed", "7"},
      {"sample", "--family", "power", "--alpha", "2", "--n", "64", "--paths", "50", "--seed", "3", "--format", "bin"},
      {"kernel-eval", "--kernel", "fh-q", "--c", "0.75", "--s", "0,0.25,0.5", "--t", "0.1,0.5,0.9", "--oracle"},
      {"aii-check", "--family", "power", "--alpha", "2"},
      {"cm-check", "--check", "membership", "--family", "power", "--alpha", "2"},
      {"cm-check", "--check", "lemma1", "--c", "0.75", "--trials", "20"},
      {"cm-check", "--check", "subhalf", "--c", "0.5"},
      {"fh-diagnose", "--c", "0.8", "--n-list", "64,128,256,512"},
      {"qc-trend", "--c", "0.75"},
      {"girsanov", "--c-target", "0.8", "--paths", "2000", "--seed", "1"},
      {"perturbed", "--paths", "2000", "--seed", "2", "--format", "csv"},
  };
  int identical = 0;
  std::string bad;
  std::ostringstream err;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::string contents[2];
    bool ok = true;
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = dir / ("run" + std::to_string(i) + "_" + std::to_string(rep));
      std::vector<std::string> args = runs[i];
      args.push_back("--out");
      args.push_back(out.string());
      ok = ok && cli::run(args, err) == cli::kExitOk;
      contents[rep] = slurp(out);
    }
    if (ok && !contents[0].empty() && contents[0] == contents[1]) ++identical;
    else if (bad.empty()) bad = runs[i][0];
  }
  std::filesystem::remove_all(dir);
  std::string detail = fmt("%g/%g runs byte-identical", identical, static_cast<double>(runs.size()));
  if (!bad.empty()) detail += "; first mismatch in " + bad + " " + err.str();
  return {identical == static_cast<int>(runs.size()), detail};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "kernel closed forms vs quadrature oracle", 5, kernel_closed_forms},
      {2, "c=1 collapse to the classical bridge", 1, c1_collapse},
      {3, "exact sampler marginals", 30, exact_marginals},
      {4, "Hardy-type bound ||g|| <= 2/(2c-1) ||f||", 10, lemma_bound},
      {5, "Cameron-Martin round trip", 10, cm_round_trip},
      {6, "power-drift non-membership witness", 5, power_witness},
      {7, "membership iff c > 1/2", 30, claim_b},
      {8, "singularity unless c = 1", 120, claim_c},
      {9, "strict local martingale mass collapse", 60, remark_24},
      {10, "perturbed bridge equivalence", 60, example_26},
      {11, "discrete operator algebra", 30, operator_algebra},
      {12, "CLI determinism", 60, cli_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s [%02d] %s (%.2f s / %.0f s budget%s): %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.budget_s, in_time ? "" : ", over budget", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
