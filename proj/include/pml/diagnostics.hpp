#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "pml/curve.hpp"
#include "pml/projection.hpp"
#include "pml/rate_function.hpp"

namespace pml {

enum class Verdict { converging, diverging, inconclusive };

std::string_view to_string(Verdict verdict);

/// Ratios f(y') / f(y) along a decreasing sequence of y.
struct RatioTrace {
  std::vector<std::pair<double, double>> points;  // (y, ratio), y strictly decreasing
  double target = 1.0;
  Verdict verdict = Verdict::inconclusive;
};

/// Verdict for a trace against `target`: converging when the last ratio is
/// within 5% of the target and |ratio - target| shrinks monotonically over
/// the last four points; diverging when the last deviation is beyond 5% and
/// growing; inconclusive otherwise.
Verdict classify(const std::vector<std::pair<double, double>>& points, double target);

/// f(y + c y (y + f(y))) / f(y). Throws std::domain_error when a perturbed
/// argument leaves [0, b] or a y sits below the underflow floor.
RatioTrace check_a1(const RateFunction& rate, double c, const std::vector<double>& ys, double target = 1.0);
/// f(y + c y f(y) (y + f(y))) / f(y).
RatioTrace check_a1_prime(const RateFunction& rate, double c, const std::vector<double>& ys,
                          double target = 1.0);

struct ReachProbe {
  double delta = 0.0;
  PlanarPoint probe;
  int multiplicity = 1;
  std::vector<double> minimizers;
  bool degenerate = false;
};

/// Projects (-delta, 0) for every delta in (0, 0.5].
std::vector<ReachProbe> probe_medial_axis(const Curve& curve, const std::vector<double>& deltas);

struct CircleExpansionRow {
  double t = 0.0;
  double g_circle = 0.0;
  double linear = 0.0;
  double ratio = 0.0;  // NaN when delta = 0
  double rel_err = 0.0;
};

/// dr/dt of the circle of radius 1 + delta against delta / (delta + 1) * t,
/// for t in (0, 0.5].
std::vector<CircleExpansionRow> circle_g_expansion(double delta, const std::vector<double>& ts);

}  // namespace pml
