#include "pml/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pml {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::converging:
      return "converging";
    case Verdict::diverging:
      return "diverging";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Verdict classify(const std::vector<std::pair<double, double>>& points, double target) {
  if (points.empty()) return Verdict::inconclusive;
  const double tolerance = 0.05 * std::abs(target);
  const std::size_t window = std::min<std::size_t>(4, points.size());
  const std::size_t first = points.size() - window;
  bool shrinking = true;
  bool growing = true;
  for (std::size_t i = first + 1; i < points.size(); ++i) {
    const double before = std::abs(points[i - 1].second - target);
    const double now = std::abs(points[i].second - target);
    if (now > before) shrinking = false;
    if (now < before) growing = false;
  }
  const double last = std::abs(points.back().second - target);
  if (last <= tolerance && shrinking) return Verdict::converging;
  if (last > tolerance && growing && window > 1) return Verdict::diverging;
  return Verdict::inconclusive;
}

namespace {

template <typename Perturb>
RatioTrace trace_ratios(const RateFunction& rate, const std::vector<double>& ys, double target, Perturb perturb) {
  RatioTrace trace;
  trace.target = target;
  double previous = std::numeric_limits<double>::infinity();
  for (double y : ys) {
    if (!(y < previous)) throw std::invalid_argument("y sequence must be strictly decreasing");
    previous = y;
    if (!(y > 0.0) || y < rate.y_floor()) {
      std::ostringstream os;
      os << "y = " << y << " is at or below the underflow floor " << rate.y_floor();
      throw std::domain_error(os.str());
    }
    const double fy = rate.f(y);
    const double moved = perturb(y, fy);
    if (!(moved >= 0.0 && moved <= rate.b())) {
      std::ostringstream os;
      os << "perturbed argument " << moved << " leaves [0, " << rate.b() << "]";
      throw std::domain_error(os.str());
    }
    trace.points.emplace_back(y, rate.f(moved) / fy);
  }
  trace.verdict = classify(trace.points, target);
  return trace;
}

}  // namespace

RatioTrace check_a1(const RateFunction& rate, double c, const std::vector<double>& ys, double target) {
  return trace_ratios(rate, ys, target, [c](double y, double fy) { return y + c * y * (y + fy); });
}

RatioTrace check_a1_prime(const RateFunction& rate, double c, const std::vector<double>& ys, double target) {
  return trace_ratios(rate, ys, target, [c](double y, double fy) { return y + c * y * fy * (y + fy); });
}

std::vector<ReachProbe> probe_medial_axis(const Curve& curve, const std::vector<double>& deltas) {
  const Projector projector(curve);
  std::vector<ReachProbe> out;
  for (double delta : deltas) {
    if (!(delta > 0.0 && delta <= 0.5)) throw std::invalid_argument("probe deltas must lie in (0, 0.5]");
    ReachProbe probe;
    probe.delta = delta;
    probe.probe = {-delta, 0.0};
    const ProjectionResult p = projector(probe.probe);
    probe.multiplicity = p.multiplicity;
    probe.minimizers = p.multiplicity > 1 ? p.all_minimizers : std::vector<double>{p.t_star};
    probe.degenerate = p.degenerate;
    out.push_back(std::move(probe));
  }
  return out;
}

std::vector<CircleExpansionRow> circle_g_expansion(double delta, const std::vector<double>& ts) {
  const Curve circle = Curve::circle(delta);
  std::vector<CircleExpansionRow> rows;
  for (double t : ts) {
    if (!(t > 0.0 && t <= 0.5)) throw std::invalid_argument("expansion points must lie in (0, 0.5]");
    CircleExpansionRow row;
    row.t = t;
    row.g_circle = circle.radial_rate(t);
    row.linear = delta / (delta + 1.0) * t;
    if (delta == 0.0) {
      row.ratio = std::numeric_limits<double>::quiet_NaN();
      row.rel_err = std::numeric_limits<double>::quiet_NaN();
    } else {
      row.ratio = row.g_circle / row.linear;
      row.rel_err = std::abs(row.ratio - 1.0);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pml
