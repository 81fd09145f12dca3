#include "pml/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pml {

namespace {

constexpr double kLinearTolerance = 1e-14;
constexpr double kLogFloor = 1e-300;
constexpr double kTieRelative = 1e-10;
constexpr double kDistinctParameters = 1e-6;
constexpr double kDegenerateRelative = 1e-12;
constexpr int kMaxBisections = 400;

double squared(double v) { return v * v; }

// l(t) - l(0) from the offset d = q(t) - q(0), with q(0) = (1, 0).
double loss_shift(PlanarPoint d, PlanarPoint z) {
  return d.x * (d.x + 2.0 * (1.0 - z.x)) + d.y * (d.y - 2.0 * z.y);
}

double loss_at_origin(PlanarPoint z) { return squared(1.0 - z.x) + squared(z.y); }

void require_finite(PlanarPoint z) {
  if (!std::isfinite(z.x) || !std::isfinite(z.y)) throw std::invalid_argument("projection of a non-finite point");
}

}  // namespace

double loss(const Curve& curve, PlanarPoint z, double t) {
  const PlanarPoint d = curve.point(t) - z;
  return dot(d, d);
}

double loss_derivative(const Curve& curve, PlanarPoint z, double t) {
  const CurveJet j = curve.jet(t);
  return 2.0 * (j.radial - dot(z, j.velocity));
}

Projector::Projector(Curve curve, int scan_cells) : curve_(std::move(curve)) {
  if (scan_cells < 2 || scan_cells % 2 != 0) throw std::invalid_argument("scan_cells must be even and >= 2");
  if (curve_.kind() == CurveKind::kink) return;
  const int half = scan_cells / 2;
  const double B = curve_.half_range();
  nodes_.reserve(scan_cells + 1);
  for (int k = -half; k <= half; ++k) {
    const double t = k == half ? B : (k == -half ? -B : B * k / half);
    nodes_.push_back({t, curve_.jet(t)});
  }
}

double Projector::half_slope(PlanarPoint z, double t) const {
  const CurveJet j = curve_.jet(t);
  return j.radial - dot(z, j.velocity);
}

double Projector::refine(PlanarPoint z, double lo, double hi) const {
  // invariant: slope(lo) < 0 < slope(hi)
  if (lo == 0.0) return refine_near_zero(z, 1.0, hi);
  if (hi == 0.0) return refine_near_zero(z, -1.0, -lo);
  if (lo < 0.0 && hi > 0.0) {
    const double s0 = half_slope(z, 0.0);
    if (s0 == 0.0) return 0.0;
    return s0 < 0.0 ? refine_near_zero(z, 1.0, hi) : refine_near_zero(z, -1.0, -lo);
  }
  for (int i = 0; i < kMaxBisections && hi - lo > kLinearTolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double s = half_slope(z, mid);
    if (s == 0.0) return mid;
    (s < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Root of the slope on direction * (0, reach], bisected in u = log|t|. The
// slope at 0 and at direction * reach have opposite signs.
double Projector::refine_near_zero(PlanarPoint z, double direction, double reach) const {
  const double s0 = half_slope(z, 0.0);
  const auto same_side_as_zero = [&](double magnitude) {
    const double s = half_slope(z, direction * magnitude);
    return s != 0.0 && (s < 0.0) == (s0 < 0.0);
  };
  if (!same_side_as_zero(kLogFloor)) return direction * kLogFloor;
  double u_lo = std::log(kLogFloor);
  double u_hi = std::log(reach);
  for (int i = 0; i < kMaxBisections; ++i) {
    const double mid = 0.5 * (u_lo + u_hi);
    if (!(u_hi - u_lo > 1e-15 * std::max(1.0, std::abs(mid)))) break;
    if (mid <= u_lo || mid >= u_hi) break;
    (same_side_as_zero(std::exp(mid)) ? u_lo : u_hi) = mid;
  }
  return direction * std::min(std::exp(0.5 * (u_lo + u_hi)), reach);
}

// Walks edge + (toward - edge) 2^-m for m = 1, 2, ... up to the edge, refining
// each descending-to-ascending sign change on the way. Returns the slope sign
// nearest the edge (0 if every probe is flat).
int Projector::scan_beside(PlanarPoint z, double edge, double toward, double toward_slope,
                           std::vector<double>& roots) const {
  double previous_t = toward;
  double previous_s = toward_slope;
  double step = toward - edge;
  int nearest = 0;
  for (int m = 0; m < 1100; ++m) {
    step *= 0.5;
    const double t = edge + step;
    if (t == edge) break;
    const double s = half_slope(z, t);
    if (s == 0.0) continue;
    const bool left_side = t < edge;
    const double lo_s = left_side ? previous_s : s;
    const double hi_s = left_side ? s : previous_s;
    if (lo_s < 0.0 && hi_s > 0.0)
      roots.push_back(left_side ? refine(z, previous_t, t) : refine(z, t, previous_t));
    previous_t = t;
    previous_s = s;
    nearest = s < 0.0 ? -1 : 1;
  }
  return nearest;
}

ProjectionResult Projector::select(PlanarPoint z, std::vector<double> candidates, bool degenerate) const {
  struct Candidate {
    double t;
    double shift;
  };
  std::sort(candidates.begin(), candidates.end());
  std::vector<Candidate> merged;
  for (double t : candidates) {
    const double shift = loss_shift(curve_.offset(t), z);
    if (!merged.empty() && t - merged.back().t <= kDistinctParameters && !degenerate) {
      if (shift < merged.back().shift) merged.back() = {t, shift};
      continue;
    }
    merged.push_back({t, shift});
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : merged) best = std::min(best, c.shift);
  const double threshold = kTieRelative * (1.0 + loss_at_origin(z) + best);

  ProjectionResult result;
  result.degenerate = degenerate;
  std::vector<double> tied;
  for (const auto& c : merged)
    if (c.shift <= best + threshold) tied.push_back(c.t);

  result.t_star = tied.front();
  result.multiplicity = static_cast<int>(tied.size());
  if (result.multiplicity > 1) result.all_minimizers = std::move(tied);
  result.point = curve_.point(result.t_star);
  const PlanarPoint d = result.point - z;
  result.sq_dist = dot(d, d);
  result.at_boundary = std::abs(result.t_star) == curve_.half_range();
  return result;
}

ProjectionResult Projector::project_kink(PlanarPoint z) const {
  const double B = curve_.half_range();
  // closest point on each straight half: (1 + t, t), t >= 0 and (1 - t, t), t <= 0
  const double upper = std::clamp(0.5 * (z.x - 1.0 + z.y), 0.0, B);
  const double lower = std::clamp(0.5 * (1.0 - z.x + z.y), -B, 0.0);
  return select(z, {lower, upper}, false);
}

ProjectionResult Projector::operator()(PlanarPoint z) const {
  require_finite(z);
  if (curve_.kind() == CurveKind::kink) return project_kink(z);

  const std::size_t n = nodes_.size();
  std::vector<double> slope(n);
  double lowest = std::numeric_limits<double>::infinity();
  double highest = -lowest;
  for (std::size_t k = 0; k < n; ++k) {
    const CurveJet& j = nodes_[k].jet;
    slope[k] = j.radial - dot(z, j.velocity);
    const double l = squared(j.point.x - z.x) + squared(j.point.y - z.y);
    lowest = std::min(lowest, l);
    highest = std::max(highest, l);
  }

  std::vector<double> candidates;
  if (highest - lowest <= kDegenerateRelative * (1.0 + lowest)) {
    for (const auto& node : nodes_) candidates.push_back(node.t);
    return select(z, std::move(candidates), true);
  }

  if (slope.front() > 0.0) candidates.push_back(nodes_.front().t);
  if (slope.back() < 0.0) candidates.push_back(nodes_.back().t);
  for (std::size_t k = 0; k < n; ++k) {
    if (slope[k] == 0.0) {
      // a run of exactly flat nodes: look just outside it for hidden sign changes
      std::size_t j = k;
      while (j + 1 < n && slope[j + 1] == 0.0) ++j;
      const int left = k == 0 ? 0 : scan_beside(z, nodes_[k].t, nodes_[k - 1].t, slope[k - 1], candidates);
      const int right = j + 1 == n ? 0 : scan_beside(z, nodes_[j].t, nodes_[j + 1].t, slope[j + 1], candidates);
      const bool falls_in = k == 0 || left < 0 || (left == 0 && slope[k - 1] < 0.0);
      const bool rises_out = j + 1 == n || right > 0 || (right == 0 && slope[j + 1] > 0.0);
      if (falls_in && rises_out) {
        const bool spans_zero = nodes_[k].t <= 0.0 && nodes_[j].t >= 0.0;
        candidates.push_back(spans_zero ? 0.0 : nodes_[(k + j) / 2].t);
      }
      k = j;
    } else if (k + 1 < n && slope[k] < 0.0 && slope[k + 1] > 0.0) {
      candidates.push_back(refine(z, nodes_[k].t, nodes_[k + 1].t));
    }
  }
  if (candidates.empty()) {
    // no sign information (non-finite slopes); fall back to the best node
    std::size_t best = 0;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      const double l = loss(curve_, z, nodes_[k].t);
      if (l < best_loss) {
        best_loss = l;
        best = k;
      }
    }
    candidates.push_back(nodes_[best].t);
  }
  return select(z, std::move(candidates), false);
}

ProjectionResult project(const Curve& curve, PlanarPoint z) { return Projector(curve)(z); }

GridOracle::GridOracle(Curve curve, int n_grid) : curve_(std::move(curve)) {
  if (n_grid < 1000) throw std::invalid_argument("grid oracle needs at least 1000 points");
  const double B = curve_.half_range();
  const int last = n_grid - 1;
  spacing_ = 2.0 * B / last;
  ts_.resize(n_grid);
  points_.resize(n_grid);
  for (int k = 0; k < n_grid; ++k) {
    // symmetric by construction: ts_[last - k] == -ts_[k]
    const double t = k == 0 ? -B : (k == last ? B : B * (2.0 * k - last) / last);
    ts_[k] = t;
    points_[k] = curve_.point(t);
  }
}

ProjectionResult GridOracle::operator()(PlanarPoint z) const {
  require_finite(z);
  const std::size_t n = ts_.size();
  std::vector<double> l(n);
  for (std::size_t k = 0; k < n; ++k) l[k] = squared(points_[k].x - z.x) + squared(points_[k].y - z.y);

  struct Minimum {
    double t;
    double value;
  };
  std::vector<Minimum> minima;
  for (std::size_t k = 0; k < n; ++k) {
    const bool left_ok = k == 0 || l[k] <= l[k - 1];
    const bool right_ok = k + 1 == n || l[k] <= l[k + 1];
    if (!left_ok || !right_ok) continue;
    Minimum m{ts_[k], l[k]};
    if (k > 0 && k + 1 < n) {
      const double curvature = l[k - 1] - 2.0 * l[k] + l[k + 1];
      if (curvature > 0.0) {
        const double step = std::clamp(0.5 * (l[k - 1] - l[k + 1]) / curvature, -1.0, 1.0);
        const double t = ts_[k] + step * spacing_;
        const double value = loss(curve_, z, t);
        if (value < m.value) m = {t, value};
      }
    }
    minima.push_back(m);
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : minima) best = std::min(best, m.value);
  const double threshold = kTieRelative * (1.0 + best);
  std::vector<double> tied;
  for (const auto& m : minima) {
    if (m.value > best + threshold) continue;
    if (!tied.empty() && m.t - tied.back() <= kDistinctParameters) continue;
    tied.push_back(m.t);
  }

  ProjectionResult result;
  result.t_star = tied.front();
  result.multiplicity = static_cast<int>(tied.size());
  if (result.multiplicity > 1) result.all_minimizers = tied;
  result.point = curve_.point(result.t_star);
  result.sq_dist = loss(curve_, z, result.t_star);
  result.at_boundary = std::abs(result.t_star) == curve_.half_range();
  return result;
}

ProjectionResult project_grid_oracle(const Curve& curve, PlanarPoint z, int n_grid) {
  return GridOracle(curve, n_grid)(z);
}

}  // namespace pml
