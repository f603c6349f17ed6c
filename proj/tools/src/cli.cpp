#include "gbb_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "gbb/cameron_martin.hpp"
#include "gbb/drift.hpp"
#include "gbb/ensemble_io.hpp"
#include "gbb/errors.hpp"
#include "gbb/feldman_hajek.hpp"
#include "gbb/girsanov.hpp"
#include "gbb/grid.hpp"
#include "gbb/kernels.hpp"
#include "gbb/quadrature.hpp"
#include "gbb/rng.hpp"
#include "gbb/sampler.hpp"
#include "gbb/version.hpp"
#include "gbb_cli/report.hpp"

namespace gbb::cli {
namespace {

struct FamilyOpts {
  std::string family = "bridge";
  double c = 1.0;
  double alpha = 2.0;
  double delta = 0.25;
  double kappa = 0.35;
};

struct GridOpts {
  std::string kind = "geometric";
  std::size_t n = 512;
  double eps_min = 1e-4;
};

struct OutputOpts {
  std::string out;
  std::string format;
};

void add_family(CLI::App* app, FamilyOpts& f) {
  app->add_option("--family", f.family, "bridge | power | perturbed")->capture_default_str();
  app->add_option("--c", f.c, "drift scale of the bridge family")->capture_default_str();
  app->add_option("--alpha", f.alpha, "exponent of the power family")->capture_default_str();
  app->add_option("--delta", f.delta, "damping exponent of the perturbed family")->capture_default_str();
  app->add_option("--kappa", f.kappa, "growth-bound constant of the perturbed family")->capture_default_str();
}

void add_grid(CLI::App* app, GridOpts& g) {
  app->add_option("--grid", g.kind, "uniform | geometric")->capture_default_str();
  app->add_option("--n", g.n, "number of grid intervals")->capture_default_str();
  app->add_option("--eps-min", g.eps_min, "distance of the last node from t = 1")->capture_default_str();
}

void add_output(CLI::App* app, OutputOpts& o) {
  app->add_option("--out", o.out, "output path (stdout when omitted)");
  app->add_option("--format", o.format, "csv | json (bin for sample); inferred from --out");
}

DriftFamily make_family(const FamilyOpts& f) {
  if (f.family == "bridge") return DriftFamily::bridge(f.c);
  if (f.family == "power") return DriftFamily::power(f.alpha);
  if (f.family == "perturbed") return DriftFamily::perturbed_tanh(f.delta, f.kappa);
  throw ConfigError("unknown family '" + f.family + "' (expected bridge, power or perturbed)");
}

void echo_family(ConfigEcho& e, const FamilyOpts& f) {
  e.add("family", f.family);
  if (f.family == "bridge") e.add("c", f.c);
  if (f.family == "power") e.add("alpha", f.alpha);
  if (f.family == "perturbed") {
    e.add("delta", f.delta);
    e.add("kappa", f.kappa);
  }
}

GridPtr make_grid_from(const GridOpts& g) { return make_grid(parse_grid_kind(g.kind), g.n, g.eps_min); }

void echo_grid(ConfigEcho& e, const GridOpts& g) {
  e.add("grid", g.kind);
  e.add("n", g.n);
  e.add("eps-min", g.eps_min);
}

Format resolve_format(const OutputOpts& o, Format fallback) {
  if (!o.format.empty()) return parse_format(o.format);
  const std::string ext = std::filesystem::path(o.out).extension().string();
  if (ext == ".json") return Format::Json;
  if (ext == ".csv") return Format::Csv;
  if (ext == ".bin") return Format::Binary;
  return fallback;
}

Json trend_json(const TrendReport& r) {
  Json j = Json::object();
  j["abscissa"] = r.abscissa_name;
  j["ordinate"] = r.ordinate_name;
  j["abscissae"] = r.abscissae;
  j["ordinates"] = r.ordinates;
  j["slope"] = r.slope;
  j["intercept"] = r.intercept;
  j["r2"] = r.r2;
  j["last_ratio"] = r.last_ratio;
  j["verdict"] = to_string(r.verdict);
  return j;
}

Table trend_table(const TrendReport& r) {
  Table t;
  t.columns = {r.abscissa_name, r.ordinate_name};
  for (std::size_t i = 0; i < r.abscissae.size(); ++i) t.rows.push_back({r.abscissae[i], r.ordinates[i]});
  return t;
}

// ---------------------------------------------------------------- sample

struct SampleCmd {
  FamilyOpts fam;
  GridOpts grid;
  OutputOpts out;
  std::string sampler = "auto";
  std::size_t dim = 1;
  std::size_t paths = 1000;
  std::uint64_t seed = 0;
};

void run_sample(const SampleCmd& cmd) {
  const DriftFamily fam = make_family(cmd.fam);
  const GridPtr grid = make_grid_from(cmd.grid);
  std::string sampler = cmd.sampler;
  if (sampler == "auto") sampler = fam.kind() == DriftFamily::Kind::PerturbedBridge ? "perturbed" : "exact";

  std::optional<PathEnsemble> ens;
  if (sampler == "exact") {
    ens = sample_exact(fam, grid, cmd.dim, cmd.paths, cmd.seed);
  } else if (sampler == "em") {
    ens = sample_em(fam, grid, cmd.dim, cmd.paths, cmd.seed);
  } else if (sampler == "bb") {
    if (fam.kind() != DriftFamily::Kind::BridgeC || fam.c() != 1.0) {
      throw ConfigError("the bb sampler represents the classical bridge only (family bridge, c = 1)");
    }
    ens = sample_bb_rep(grid, cmd.dim, cmd.paths, cmd.seed);
  } else if (sampler == "perturbed") {
    ens = std::move(sample_perturbed(fam, grid, cmd.dim, cmd.paths, cmd.seed).paths);
  } else {
    throw ConfigError("unknown sampler '" + sampler + "' (expected auto, exact, em, bb or perturbed)");
  }

  Report rep;
  rep.command = "sample";
  echo_family(rep.config, cmd.fam);
  echo_grid(rep.config, cmd.grid);
  rep.config.add("sampler", sampler);
  rep.config.add("dim", cmd.dim);
  rep.config.add("paths", cmd.paths);
  rep.config.add("seed", std::to_string(cmd.seed));

  const Format format = resolve_format(cmd.out, Format::Csv);
  if (format == Format::Binary) {
    std::ostringstream buf;
    write_ensemble_binary(*ens, buf);
    write_text(buf.str(), cmd.out.out);
    return;
  }
  if (format == Format::Csv) {
    std::ostringstream buf;
    buf << "# version: " << kVersion << '\n';
    buf << "# command_line: " << rep.config.command_line(rep.command) << '\n';
    for (const auto& [flag, value] : rep.config.entries()) buf << "# " << flag << ": " << value << '\n';
    write_ensemble_csv(*ens, buf);
    write_text(buf.str(), cmd.out.out);
    return;
  }
  rep.result["nodes"] = std::vector<double>(grid->nodes().begin(), grid->nodes().end());
  rep.table.columns = {"path_id", "node", "coordinate", "value"};
  for (std::size_t p = 0; p < ens->n_paths(); ++p) {
    for (std::size_t k = 0; k < ens->n_nodes(); ++k) {
      for (std::size_t d = 0; d < ens->dim(); ++d) {
        rep.table.rows.push_back({static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(k),
                                  static_cast<std::uint64_t>(d), ens->at(p, k, d)});
      }
    }
  }
  write_report(rep, cmd.out.out, format);
}

// ----------------------------------------------------------- kernel-eval

struct KernelCmd {
  FamilyOpts fam;
  OutputOpts out;
  std::string kernel = "cov-q";
  std::vector<double> s = {0.0};
  std::vector<double> t = {0.5};
  double t0 = -1.0;
  bool oracle = false;
};

void run_kernel_eval(const KernelCmd& cmd) {
  Report rep;
  rep.command = "kernel-eval";
  rep.config.add("kernel", cmd.kernel);
  echo_family(rep.config, cmd.fam);
  rep.config.add("s", cmd.s);
  rep.config.add("t", cmd.t);
  if (cmd.t0 >= 0.0) rep.config.add("t0", cmd.t0);
  if (cmd.oracle) rep.config.add("oracle", std::string());

  const bool on_c = cmd.kernel == "cov-q" || cmd.kernel == "fh-q";
  const bool unary = cmd.kernel == "drift" || cmd.kernel == "log-phi" || cmd.kernel == "aii-mass";
  if (!on_c && !unary && cmd.kernel != "aii") {
    throw ConfigError("unknown kernel '" + cmd.kernel + "' (expected drift, log-phi, aii, aii-mass, cov-q or fh-q)");
  }
  if (on_c && cmd.fam.family != "bridge") throw ConfigError("cov-q and fh-q are defined for the bridge family");
  const std::optional<DriftFamily> fam = on_c ? std::nullopt : std::optional<DriftFamily>(make_family(cmd.fam));

  rep.table.columns = {"kernel", "s", "t", "value", "method", "oracle", "abs_diff"};
  const std::vector<double> s_list = unary ? std::vector<double>{0.0} : cmd.s;
  for (double s : s_list) {
    for (double t : cmd.t) {
      double value = 0.0;
      std::string method = "closed_form";
      double oracle = std::nan("");
      if (cmd.kernel == "drift") {
        value = drift_coefficient(*fam, t);
        if (cmd.oracle) oracle = value;
      } else if (cmd.kernel == "log-phi") {
        value = log_phi(*fam, t);
        if (cmd.oracle) oracle = quad_oracle([&](double r) { return drift_coefficient(*fam, r); }, 0.0, t);
      } else if (cmd.kernel == "aii") {
        value = aii_kernel(*fam, s, t);
        if (cmd.oracle) {
          const double inner = quad_oracle([&](double r) { return drift_coefficient(*fam, r); }, s, t);
          oracle = drift_coefficient(*fam, s) * std::exp(-inner);
        }
      } else if (cmd.kernel == "aii-mass") {
        const double upper = cmd.t0 >= 0.0 ? cmd.t0 : t;
        value = cmd.t0 >= 0.0 ? aii_mass(*fam, t, cmd.t0) : aii_mass(*fam, t);
        if (cmd.oracle) oracle = quad_oracle([&](double r) { return aii_kernel(*fam, r, t); }, 0.0, upper);
      } else if (cmd.kernel == "cov-q") {
        value = cov_Q(cmd.fam.c, s, t);
        if (cmd.oracle) oracle = cov_Q_integral(cmd.fam.c, s, t);
      } else {
        const KernelValue kv = fh_kernel_q_eval(cmd.fam.c, s, t);
        value = kv.value;
        method = gbb::to_string(kv.method);
        if (cmd.oracle) oracle = fh_kernel_q_integral(cmd.fam.c, s, t);
      }
      const double diff = cmd.oracle ? std::abs(value - oracle) : std::nan("");
      rep.table.rows.push_back({cmd.kernel, s, t, value, method, oracle, diff});
    }
  }
  write_report(rep, cmd.out.out, resolve_format(cmd.out, Format::Json));
}

// ------------------------------------------------------------- aii-check

struct AiiCmd {
  FamilyOpts fam;
  OutputOpts out;
  int k_max = 20;
  double t0 = 0.5;
};

void run_aii_check(const AiiCmd& cmd) {
  const DriftFamily fam = make_family(cmd.fam);
  if (cmd.k_max < 2 || cmd.k_max > 40) throw ConfigError("--k-max must lie in [2, 40]");
  Report rep;
  rep.command = "aii-check";
  echo_family(rep.config, cmd.fam);
  rep.config.add("k-max", cmd.k_max);
  rep.config.add("t0", cmd.t0);
  rep.table.columns = {"t", "mass", "partial_mass", "smoothing_residual_id", "smoothing_residual_cos"};

  bool mass_monotone = true, partial_decreasing = true;
  double prev_mass = -1.0, prev_partial = INFINITY;
  double last_id = 0.0, last_cos = 0.0;
  QuadratureOptions opts;
  opts.abs_tol = 1e-11;
  for (int k = 1; k <= cmd.k_max; ++k) {
    const double t = 1.0 - std::ldexp(1.0, -k);
    const double mass = aii_mass(fam, t);
    const bool has_partial = cmd.t0 <= t;
    const double partial = has_partial ? aii_mass(fam, t, cmd.t0) : std::nan("");
    auto smooth = [&](const std::function<double(double)>& sigma) {
      const double conv = integrate([&](double s) { return aii_kernel(fam, s, t) * sigma(s); }, 0.0, t, opts).value;
      return conv - sigma(t) * mass;
    };
    last_id = smooth([](double s) { return s; });
    last_cos = smooth([](double s) { return std::cos(std::numbers::pi * s); });
    mass_monotone = mass_monotone && mass >= prev_mass;
    if (has_partial) {
      partial_decreasing = partial_decreasing && partial <= prev_partial;
      prev_partial = partial;
    }
    prev_mass = mass;
    rep.table.rows.push_back({t, mass, partial, last_id, last_cos});
  }
  rep.result["mass_monotone"] = mass_monotone;
  rep.result["partial_mass_decreasing"] = partial_decreasing;
  rep.result["final_mass"] = prev_mass;
  rep.result["final_partial_mass"] = prev_partial;
  rep.result["final_smoothing_residual_id"] = last_id;
  rep.result["final_smoothing_residual_cos"] = last_cos;
  write_report(rep, cmd.out.out, resolve_format(cmd.out, Format::Json));
}

// -------------------------------------------------------------- cm-check

struct CmCmd {
  FamilyOpts fam;
  GridOpts grid{"geometric", 4096, 0x1.0p-14};
  OutputOpts out;
  std::string check = "membership";
  double k_power = 0.6;
  bool battery = false;
  std::string hdot = "one";
  std::string h = "identity";
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  std::vector<double> eps_list;
};

void run_cm_check(CmCmd cmd) {
  Report rep;
  rep.command = "cm-check";
  rep.config.add("check", cmd.check);
  if (cmd.eps_list.empty()) cmd.eps_list = dyadic_eps_list();
  const Format format = resolve_format(cmd.out, Format::Json);

  if (cmd.check == "lemma1") {
    rep.config.add("c", cmd.fam.c);
    echo_grid(rep.config, cmd.grid);
    rep.config.add("trials", cmd.trials);
    rep.config.add("seed", std::to_string(cmd.seed));
    const GridPtr grid = make_grid_from(cmd.grid);
    const CounterNormal normal(cmd.seed);
    rep.table.columns = {"trial", "ratio"};
    double worst = 0.0, bound = 0.0;
    for (std::size_t trial = 0; trial < cmd.trials; ++trial) {
      GridFunction f(grid, 1, GridFunction::Tag::Function);
      for (std::size_t i = 0; i < grid->size(); ++i) f(i) = normal(trial, i);
      const Lemma1Result r = lemma1_g(cmd.fam.c, f);
      worst = std::max(worst, r.ratio);
      bound = r.bound;
      rep.table.rows.push_back({static_cast<std::uint64_t>(trial), r.ratio});
    }
    rep.result["bound"] = bound;
    rep.result["max_ratio"] = worst;
    rep.result["holds"] = worst <= bound + 1e-2;
  } else if (cmd.check == "roundtrip") {
    echo_family(rep.config, cmd.fam);
    echo_grid(rep.config, cmd.grid);
    rep.config.add("trials", cmd.trials);
    rep.config.add("seed", std::to_string(cmd.seed));
    const DriftFamily fam = make_family(cmd.fam);
    const GridPtr grid = make_grid_from(cmd.grid);
    const CounterNormal normal(cmd.seed);
    rep.table.columns = {"trial", "relative_l2_error"};
    double worst = 0.0;
    for (std::size_t trial = 0; trial < cmd.trials; ++trial) {
      double a[4], b[4];
      for (int j = 0; j < 4; ++j) {
        a[j] = normal(trial, 0, static_cast<std::uint64_t>(j));
        b[j] = normal(trial, 1, static_cast<std::uint64_t>(j));
      }
      const GridFunction hdot = GridFunction::sample(
          grid,
          [&](double t) {
            double v = a[0];
            for (int j = 1; j < 4; ++j) v += a[j] * std::cos(j * std::numbers::pi * t) + b[j] * std::sin(j * std::numbers::pi * t);
            return v;
          },
          GridFunction::Tag::Derivative);
      const GridFunction back = apply_T_inv(fam, apply_T(fam, hdot));
      std::vector<double> diff(grid->size());
      for (std::size_t i = 0; i < grid->size(); ++i) diff[i] = back(i) - hdot(i);
      const double err = GridFunction(grid, diff, 1, GridFunction::Tag::Derivative).l2_norm() / hdot.l2_norm();
      worst = std::max(worst, err);
      rep.table.rows.push_back({static_cast<std::uint64_t>(trial), err});
    }
    rep.result["max_relative_l2_error"] = worst;
  } else if (cmd.check == "membership") {
    echo_family(rep.config, cmd.fam);
    echo_grid(rep.config, cmd.grid);
    const DriftFamily fam = make_family(cmd.fam);
    const GridPtr grid = make_grid_from(cmd.grid);
    if (cmd.battery) {
      rep.config.add("battery", std::string());
      rep.config.add("eps-list", cmd.eps_list);
      rep.table.columns = {"function", "verdict", "slope", "r2", "last_value"};
      bool all_bounded = true;
      for (const auto& item : h00_battery()) {
        const TrendReport tr =
            membership_diagnostic(fam, GridFunction::sample(grid, item.fn, GridFunction::Tag::Function), cmd.eps_list);
        all_bounded = all_bounded && tr.verdict == Verdict::Bounded;
        rep.table.rows.push_back({item.name, to_string(tr.verdict), tr.slope, tr.r2, tr.ordinates.back()});
      }
      rep.result["all_bounded"] = all_bounded;
    } else {
      rep.config.add("k-power", cmd.k_power);
      rep.config.add("eps-list", cmd.eps_list);
      const double q = cmd.k_power;
      const TrendReport tr = membership_diagnostic(
          fam, GridFunction::sample(grid, [q](double t) { return t * std::pow(1.0 - t, q); }, GridFunction::Tag::Function),
          cmd.eps_list);
      rep.result = trend_json(tr);
      rep.table = trend_table(tr);
    }
  } else if (cmd.check == "subhalf") {
    rep.config.add("c", cmd.fam.c);
    echo_grid(rep.config, cmd.grid);
    rep.config.add("hdot", cmd.hdot);
    rep.config.add("eps-list", cmd.eps_list);
    const GridPtr grid = make_grid_from(cmd.grid);
    std::function<double(double)> fn;
    if (cmd.hdot == "one") {
      fn = [](double) { return 1.0; };
    } else if (cmd.hdot == "centered") {
      const double shift = 1.0 / (2.0 - cmd.fam.c);  // makes int_0^1 hdot (1-s)^{-c} ds vanish
      fn = [shift](double s) { return s - shift; };
    } else {
      throw ConfigError("unknown --hdot '" + cmd.hdot + "' (expected one or centered)");
    }
    const TrendReport tr =
        subhalf_diagnostic(cmd.fam.c, GridFunction::sample(grid, fn, GridFunction::Tag::Derivative), cmd.eps_list);
    rep.result = trend_json(tr);
    rep.table = trend_table(tr);
  } else if (cmd.check == "tail") {
    echo_grid(rep.config, cmd.grid);
    rep.config.add("tail-h", cmd.h);
    rep.config.add("eps-list", cmd.eps_list);
    const GridPtr grid = make_grid_from(cmd.grid);
    std::function<double(double)> fn;
    if (cmd.h == "identity") {
      fn = [](double t) { return t; };
    } else if (cmd.h == "poly") {
      fn = [](double t) { return t * (1.0 - t); };
    } else if (cmd.h == "sqrt") {
      fn = [](double t) { return std::sqrt(1.0 - t) - 1.0; };
    } else {
      throw ConfigError("unknown --tail-h '" + cmd.h + "' (expected identity, poly or sqrt)");
    }
    const TrendReport tr = tail_quotient_check(GridFunction::sample(grid, fn, GridFunction::Tag::Function), cmd.eps_list);
    rep.result = trend_json(tr);
    rep.table = trend_table(tr);
  } else {
    throw ConfigError("unknown --check '" + cmd.check + "' (expected lemma1, roundtrip, membership, subhalf or tail)");
  }
  write_report(rep, cmd.out.out, format);
}

// ----------------------------------------------------------- fh-diagnose

struct FhCmd {
  OutputOpts out;
  double c = 0.8;
  std::vector<std::size_t> n_list = {64, 128, 256, 512};
  std::string dump_matrix;
};

void run_fh_diagnose(const FhCmd& cmd) {
  Report rep;
  rep.command = "fh-diagnose";
  rep.config.add("c", cmd.c);
  rep.config.add("n-list", cmd.n_list);
  const Format format = resolve_format(cmd.out, Format::Json);
  const TrendReport hs = hs_trend(cmd.c, cmd.n_list);
  const TrendReport kl = kl_trend(cmd.c, cmd.n_list);
  rep.result = trend_json(hs);
  rep.result["sym_kl"] = trend_json(kl);
  rep.table.columns = {"n", "eps_min", "hs_norm_sq", "sym_kl"};
  for (std::size_t i = 0; i < cmd.n_list.size(); ++i) {
    rep.table.rows.push_back({static_cast<std::uint64_t>(cmd.n_list[i]), fh_trend_grid(cmd.n_list[i])->eps_min(),
                              hs.ordinates[i], kl.ordinates[i]});
  }
  if (!cmd.dump_matrix.empty()) {
    std::ostringstream buf;
    write_matrix_csv(cov_matrix(CovKernel::bridge(cmd.c), fh_trend_grid(cmd.n_list.back())), buf);
    write_text(buf.str(), cmd.dump_matrix);
  }
  write_report(rep, cmd.out.out, format);
}

// -------------------------------------------------------------- qc-trend

struct QcCmd {
  OutputOpts out;
  double c = 0.75;
  std::vector<double> eps_list = {1e-3, 1e-4, 1e-5, 1e-6};
};

void run_qc_trend(const QcCmd& cmd) {
  Report rep;
  rep.command = "qc-trend";
  rep.config.add("c", cmd.c);
  rep.config.add("eps-list", cmd.eps_list);
  const TrendReport tr = qc_l2_trend(cmd.c, cmd.eps_list);
  rep.result = trend_json(tr);
  const double c = cmd.c;
  rep.result["leading_slope"] = 2.0 * c * c * (1.0 - c) * (1.0 - c) / std::pow(2.0 * c - 1.0, 3);
  rep.table = trend_table(tr);
  write_report(rep, cmd.out.out, resolve_format(cmd.out, Format::Json));
}

// ------------------------------------------------- girsanov and perturbed

struct MartingaleCmd {
  GridOpts grid{"geometric", 1024, 1e-4};
  OutputOpts out;
  FamilyOpts fam;
  double c_target = 0.8;
  std::size_t dim = 1;
  std::size_t paths = 10000;
  std::uint64_t seed = 0;
  std::vector<double> t_list = {0.9, 0.99, 0.999, 0.9999};
  double sup_sq = 4.0;
};

void summary_table(Report& rep, const DiagnosticsReport& summary, const std::vector<double>* l2) {
  rep.table.columns = {"t", "mean", "se", "median", "q05", "q95"};
  if (l2) rep.table.columns.push_back("log_density_l2");
  rep.table.columns.push_back("flags");
  for (std::size_t i = 0; i < summary.rows.size(); ++i) {
    const MartingaleRow& r = summary.rows[i];
    std::vector<Json> row = {r.t, r.mean, r.se, r.median, r.q05, r.q95};
    if (l2) row.emplace_back((*l2)[i]);
    row.emplace_back(r.mass_collapse ? "mass-collapse" : "");
    rep.table.rows.push_back(std::move(row));
  }
  rep.result["flags"] = summary.flags;
  rep.result["mass_collapse"] = !summary.rows.empty() && summary.rows.back().mass_collapse;
  bool decreasing = true;
  for (std::size_t i = 1; i < summary.rows.size(); ++i) decreasing = decreasing && summary.rows[i].median < summary.rows[i - 1].median;
  rep.result["median_decreasing"] = decreasing;
}

void run_girsanov(const MartingaleCmd& cmd) {
  Report rep;
  rep.command = "girsanov";
  rep.config.add("c-target", cmd.c_target);
  echo_grid(rep.config, cmd.grid);
  rep.config.add("dim", cmd.dim);
  rep.config.add("paths", cmd.paths);
  rep.config.add("seed", std::to_string(cmd.seed));
  rep.config.add("t-list", cmd.t_list);
  const GridPtr grid = make_grid_from(cmd.grid);
  const MartingaleTrace trace = run_bridge_girsanov(cmd.c_target, grid, cmd.dim, cmd.paths, cmd.seed, cmd.t_list);
  summary_table(rep, martingale_summary(trace, cmd.t_list), nullptr);
  write_report(rep, cmd.out.out, resolve_format(cmd.out, Format::Json));
}

void run_perturbed(const MartingaleCmd& cmd) {
  Report rep;
  rep.command = "perturbed";
  rep.config.add("delta", cmd.fam.delta);
  rep.config.add("kappa", cmd.fam.kappa);
  echo_grid(rep.config, cmd.grid);
  rep.config.add("dim", cmd.dim);
  rep.config.add("paths", cmd.paths);
  rep.config.add("seed", std::to_string(cmd.seed));
  rep.config.add("t-list", cmd.t_list);
  rep.config.add("sup-sq", cmd.sup_sq);
  const DriftFamily fam = DriftFamily::perturbed_tanh(cmd.fam.delta, cmd.fam.kappa);
  const GridPtr grid = make_grid_from(cmd.grid);
  const MartingaleTrace trace = run_perturbed_girsanov(fam, grid, cmd.dim, cmd.paths, cmd.seed, cmd.t_list);
  const DiagnosticsReport summary = martingale_summary(trace, cmd.t_list);
  const std::vector<double> l2_all = log_density_l2(trace);
  std::vector<double> l2;
  for (double t : cmd.t_list) l2.push_back(l2_all[trace.position(t)]);
  summary_table(rep, summary, &l2);
  std::vector<double> ratios;
  for (std::size_t i = 1; i < l2.size(); ++i) ratios.push_back(l2[i - 1] > 0.0 ? l2[i] / l2[i - 1] : 0.0);
  rep.result["log_density_l2_ratios"] = ratios;
  rep.result["novikov_bound"] = novikov_bound(cmd.fam.delta, cmd.fam.kappa, cmd.sup_sq);
  write_report(rep, cmd.out.out, resolve_format(cmd.out, Format::Json));
}

int dispatch(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"Generalised Brownian bridge numerical lab", "gbb"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SampleCmd sample;
  auto* sub_sample = app.add_subcommand("sample", "sample a path ensemble");
  add_family(sub_sample, sample.fam);
  add_grid(sub_sample, sample.grid);
  add_output(sub_sample, sample.out);
  sub_sample->add_option("--sampler", sample.sampler, "auto | exact | em | bb | perturbed")->capture_default_str();
  sub_sample->add_option("--dim", sample.dim)->capture_default_str();
  sub_sample->add_option("--paths", sample.paths)->capture_default_str();
  sub_sample->add_option("--seed", sample.seed)->capture_default_str();

  KernelCmd kernel;
  auto* sub_kernel = app.add_subcommand("kernel-eval", "evaluate drift, integrating factor and kernels");
  add_family(sub_kernel, kernel.fam);
  add_output(sub_kernel, kernel.out);
  sub_kernel->add_option("--kernel", kernel.kernel, "drift | log-phi | aii | aii-mass | cov-q | fh-q")->capture_default_str();
  sub_kernel->add_option("--s", kernel.s, "comma-separated s values")->delimiter(',')->capture_default_str();
  sub_kernel->add_option("--t", kernel.t, "comma-separated t values")->delimiter(',')->capture_default_str();
  sub_kernel->add_option("--t0", kernel.t0, "upper limit of the partial mass");
  sub_kernel->add_flag("--oracle", kernel.oracle, "also evaluate the quadrature oracle");

  AiiCmd aii;
  auto* sub_aii = app.add_subcommand("aii-check", "approximation-to-the-identity limits");
  add_family(sub_aii, aii.fam);
  add_output(sub_aii, aii.out);
  sub_aii->add_option("--k-max", aii.k_max, "t runs over 1 - 2^-k, k = 1..k-max")->capture_default_str();
  sub_aii->add_option("--t0", aii.t0)->capture_default_str();

  CmCmd cm;
  auto* sub_cm = app.add_subcommand("cm-check", "Cameron-Martin transforms and diagnostics");
  add_family(sub_cm, cm.fam);
  add_grid(sub_cm, cm.grid);
  add_output(sub_cm, cm.out);
  sub_cm->add_option("--check", cm.check, "lemma1 | roundtrip | membership | subhalf | tail")->capture_default_str();
  sub_cm->add_option("--k-power", cm.k_power, "membership input k(t) = t (1-t)^q")->capture_default_str();
  sub_cm->add_flag("--battery", cm.battery, "membership over the 50-function test battery");
  sub_cm->add_option("--hdot", cm.hdot, "subhalf input: one | centered")->capture_default_str();
  sub_cm->add_option("--tail-h", cm.h, "tail input: identity | poly | sqrt")->capture_default_str();
  sub_cm->add_option("--trials", cm.trials)->capture_default_str();
  sub_cm->add_option("--seed", cm.seed)->capture_default_str();
  sub_cm->add_option("--eps-list", cm.eps_list, "comma-separated, decreasing")->delimiter(',');

  FhCmd fh;
  auto* sub_fh = app.add_subcommand("fh-diagnose", "whitened Hilbert-Schmidt and KL trends");
  add_output(sub_fh, fh.out);
  sub_fh->add_option("--c", fh.c)->capture_default_str();
  sub_fh->add_option("--n-list", fh.n_list)->delimiter(',')->capture_default_str();
  sub_fh->add_option("--dump-matrix", fh.dump_matrix, "write the largest Q_c matrix as CSV");

  QcCmd qc;
  auto* sub_qc = app.add_subcommand("qc-trend", "L2 growth of q_c on clamped squares");
  add_output(sub_qc, qc.out);
  sub_qc->add_option("--c", qc.c)->capture_default_str();
  sub_qc->add_option("--eps-list", qc.eps_list)->delimiter(',')->capture_default_str();

  MartingaleCmd gir;
  auto* sub_gir = app.add_subcommand("girsanov", "density of the c-bridge against the classical bridge");
  add_grid(sub_gir, gir.grid);
  add_output(sub_gir, gir.out);
  sub_gir->add_option("--c-target", gir.c_target)->capture_default_str();
  sub_gir->add_option("--dim", gir.dim)->capture_default_str();
  sub_gir->add_option("--paths", gir.paths)->capture_default_str();
  sub_gir->add_option("--seed", gir.seed)->capture_default_str();
  sub_gir->add_option("--t-list", gir.t_list)->delimiter(',')->capture_default_str();

  MartingaleCmd pert;
  auto* sub_pert = app.add_subcommand("perturbed", "density of the perturbed bridge against the classical bridge");
  add_grid(sub_pert, pert.grid);
  add_output(sub_pert, pert.out);
  sub_pert->add_option("--delta", pert.fam.delta)->capture_default_str();
  sub_pert->add_option("--kappa", pert.fam.kappa)->capture_default_str();
  sub_pert->add_option("--dim", pert.dim)->capture_default_str();
  sub_pert->add_option("--paths", pert.paths)->capture_default_str();
  sub_pert->add_option("--seed", pert.seed)->capture_default_str();
  sub_pert->add_option("--t-list", pert.t_list)->delimiter(',')->capture_default_str();
  sub_pert->add_option("--sup-sq", pert.sup_sq, "sup |z|^2 plugged into the Novikov ceiling")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    std::cout << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gbb: " << e.what() << '\n';
    return kExitConfig;
  }

  if (sub_sample->parsed()) run_sample(sample);
  else if (sub_kernel->parsed()) run_kernel_eval(kernel);
  else if (sub_aii->parsed()) run_aii_check(aii);
  else if (sub_cm->parsed()) run_cm_check(cm);
  else if (sub_fh->parsed()) run_fh_diagnose(fh);
  else if (sub_qc->parsed()) run_qc_trend(qc);
  else if (sub_gir->parsed()) run_girsanov(gir);
  else if (sub_pert->parsed()) run_perturbed(pert);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& err) {
  try {
    return dispatch(args, err);
  } catch (const ConfigError& e) {
    err << "gbb: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "gbb: domain error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnsupportedError& e) {
    err << "gbb: unsupported: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ContractViolation& e) {
    err << "gbb: contract violation: " << e.what() << '\n';
    return kExitConfig;
  } catch (const OracleFailure& e) {
    err << "gbb: oracle failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalFailure& e) {
    err << "gbb: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "gbb: i/o error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "gbb: error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cerr);
}

}  // namespace gbb::cli
