#pragma once

#include <span>
#include <string>
#include <vector>

namespace gbb {

enum class Verdict { Bounded, Divergent, Inconclusive };

const char* to_string(Verdict v) noexcept;

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = intercept + slope x. r2 is 1 for an exact fit
/// (including constant data) and 0 when x carries no spread.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Sequence of diagnostic values against a refinement parameter (eps or n),
/// with a fitted slope and a verdict.
struct TrendReport {
  std::string abscissa_name;  // "eps" or "n"
  std::string ordinate_name;
  std::vector<double> abscissae;
  std::vector<double> ordinates;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  /// ordinates[last] / ordinates[last - 1]; 0 with fewer than two points.
  double last_ratio = 0.0;
};

/// Rule for integrals I(eps) over [0, 1 - eps] with eps decreasing.
///
/// The slope is that of ln I against ln(1/eps) over the tail half of the list
/// (at least four points).
///  - divergent: tail slope >= 0.1 with R^2 >= 0.99, or the increments of I per
///    unit of ln(1/eps) do not decay over the tail (smallest/largest >= 0.9,
///    i.e. at least logarithmic growth);
///  - bounded: the relative change over each of the last two steps is < 1%;
///  - inconclusive otherwise.
TrendReport classify_eps_trend(std::vector<double> eps, std::vector<double> values);

inline constexpr double kSlopeThreshold = 0.1;
inline constexpr double kR2Threshold = 0.99;
inline constexpr double kIncrementFlatness = 0.9;
inline constexpr double kCauchyFlat = 0.01;

/// Rule for matrix diagnostics D(n) with n increasing; slope is fitted against ln n.
///  - bounded: every value <= flat_tol;
///  - divergent: strictly increasing, last/first >= 2 and slope > 0;
///  - inconclusive otherwise.
TrendReport classify_n_trend(std::vector<double> ns, std::vector<double> values, double flat_tol = 1e-6);

/// Rule for V(eps) regressed linearly on ln(1/eps).
///  - bounded: max/min - 1 <= 1% (V settles to a finite limit);
///  - divergent: slope > 0 with R^2 >= 0.99;
///  - inconclusive otherwise.
TrendReport classify_log_linear_trend(std::vector<double> eps, std::vector<double> values);

}  // namespace gbb
