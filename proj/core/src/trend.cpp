#include "gbb/trend.hpp"

#include <algorithm>
#include <cmath>

#include "gbb/errors.hpp"

namespace gbb {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Bounded: return "bounded";
    case Verdict::Divergent: return "divergent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("linear_fit needs two or more paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

namespace {

void require_pairs(const std::vector<double>& a, const std::vector<double>& v) {
  if (a.size() != v.size() || a.size() < 2) throw ConfigError("trend needs two or more paired points");
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericalFailure("trend ordinate is not finite");
  }
}

double last_ratio(const std::vector<double>& v) {
  const double prev = v[v.size() - 2];
  return prev == 0.0 ? 0.0 : v.back() / prev;
}

}  // namespace

TrendReport classify_eps_trend(std::vector<double> eps, std::vector<double> values) {
  require_pairs(eps, values);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0 && eps[i] < 1.0)) throw ConfigError("eps values must lie in (0, 1)");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw ConfigError("eps list must be strictly decreasing");
    if (!(values[i] > 0.0)) throw NumericalFailure("trend ordinate must be positive");
  }
  TrendReport rep;
  rep.abscissa_name = "eps";
  rep.abscissae = std::move(eps);
  rep.ordinates = std::move(values);
  rep.last_ratio = last_ratio(rep.ordinates);

  const std::size_t m = rep.abscissae.size();
  const std::size_t tail = std::min(m, std::max<std::size_t>(4, (m + 1) / 2));
  const std::size_t first = m - tail;
  std::vector<double> lx, ly;
  for (std::size_t i = first; i < m; ++i) {
    lx.push_back(-std::log(rep.abscissae[i]));
    ly.push_back(std::log(rep.ordinates[i]));
  }
  const LinearFit fit = linear_fit(lx, ly);
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.r2 = fit.r2;

  // Increments per unit ln(1/eps) over the tail.
  double inc_min = INFINITY, inc_max = -INFINITY;
  for (std::size_t i = first + 1; i < m; ++i) {
    const double inc = (rep.ordinates[i] - rep.ordinates[i - 1]) / (lx[i - first] - lx[i - first - 1]);
    inc_min = std::min(inc_min, inc);
    inc_max = std::max(inc_max, inc);
  }
  const bool power_growth = fit.slope >= kSlopeThreshold && fit.r2 >= kR2Threshold;
  const bool log_growth = tail >= 3 && inc_min > 0.0 && inc_min / inc_max >= kIncrementFlatness;

  auto rel_change = [&](std::size_t i) {
    return std::abs(rep.ordinates[i] - rep.ordinates[i - 1]) / std::abs(rep.ordinates[i - 1]);
  };
  const bool flat = rel_change(m - 1) < kCauchyFlat && (m < 3 || rel_change(m - 2) < kCauchyFlat);

  if (power_growth || log_growth) {
    rep.verdict = Verdict::Divergent;
  } else if (flat) {
    rep.verdict = Verdict::Bounded;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

TrendReport classify_n_trend(std::vector<double> ns, std::vector<double> values, double flat_tol) {
  require_pairs(ns, values);
  TrendReport rep;
  rep.abscissa_name = "n";
  rep.abscissae = std::move(ns);
  rep.ordinates = std::move(values);
  rep.last_ratio = last_ratio(rep.ordinates);
  std::vector<double> lx;
  for (double n : rep.abscissae) {
    if (!(n > 0.0)) throw ConfigError("n values must be positive");
    lx.push_back(std::log(n));
  }
  const LinearFit fit = linear_fit(lx, rep.ordinates);
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.r2 = fit.r2;

  const bool all_flat =
      std::all_of(rep.ordinates.begin(), rep.ordinates.end(), [&](double v) { return std::abs(v) <= flat_tol; });
  bool increasing = true;
  for (std::size_t i = 1; i < rep.ordinates.size(); ++i) increasing = increasing && rep.ordinates[i] > rep.ordinates[i - 1];
  const double front = rep.ordinates.front();
  const bool grows = front > 0.0 && rep.ordinates.back() / front >= 2.0;

  if (all_flat) {
    rep.verdict = Verdict::Bounded;
  } else if (increasing && grows && fit.slope > 0.0) {
    rep.verdict = Verdict::Divergent;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

TrendReport classify_log_linear_trend(std::vector<double> eps, std::vector<double> values) {
  require_pairs(eps, values);
  TrendReport rep;
  rep.abscissa_name = "eps";
  rep.abscissae = std::move(eps);
  rep.ordinates = std::move(values);
  rep.last_ratio = last_ratio(rep.ordinates);
  std::vector<double> lx;
  for (double e : rep.abscissae) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("eps values must lie in (0, 1)");
    lx.push_back(-std::log(e));
  }
  const LinearFit fit = linear_fit(lx, rep.ordinates);
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.r2 = fit.r2;
  const auto [lo, hi] = std::minmax_element(rep.ordinates.begin(), rep.ordinates.end());
  if (*lo > 0.0 && *hi / *lo - 1.0 <= kCauchyFlat) {
    rep.verdict = Verdict::Bounded;
  } else if (fit.slope > 0.0 && fit.r2 >= kR2Threshold) {
    rep.verdict = Verdict::Divergent;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

}  // namespace gbb
