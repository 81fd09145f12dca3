#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string_view>

#include "pml/quadrature.hpp"
#include "pml/rate_function.hpp"

namespace pml {

struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  friend PlanarPoint operator+(PlanarPoint a, PlanarPoint b) { return {a.x + b.x, a.y + b.y}; }
  friend PlanarPoint operator-(PlanarPoint a, PlanarPoint b) { return {a.x - b.x, a.y - b.y}; }
  friend PlanarPoint operator*(double s, PlanarPoint p) { return {s * p.x, s * p.y}; }
  friend bool operator==(PlanarPoint a, PlanarPoint b) = default;
};

inline double dot(PlanarPoint a, PlanarPoint b) { return a.x * b.x + a.y * b.y; }
inline double norm(PlanarPoint p) { return std::hypot(p.x, p.y); }

enum class CurveKind { qcurve, simple_qcurve, circle, kink };

std::string_view to_string(CurveKind kind);

/// Position and first derivative of a curve at parameter t.
struct CurveJet {
  PlanarPoint point;
  PlanarPoint velocity;
  double radial = 0.0;  // point . velocity, evaluated without cancellation
};

/// A compact planar curve t -> q(t), t in [-B, B], symmetric under
/// reflection in the x-axis and passing through q(0) = (1, 0).
///
/// - qcurve:        q(t) = r(|t|) (cos t, sin t), r(t) = 1 + integral_0^t g
/// - simple_qcurve: q(t) = (1 + |t| g(|t|), t)
/// - circle:        circle of radius 1 + delta centred at (-delta, 0), in
///                  the same polar form
/// - kink:          q(t) = (1 + |t|, t)
///
/// Immutable; copies share the quadrature table.
class Curve {
 public:
  static Curve qcurve(RateFunction rate);
  /// Only for rates with f(y) = o(y): poly with gamma > 1, exp, or custom.
  static Curve simple_qcurve(RateFunction rate);
  static Curve circle(double delta, double half_range = std::numbers::pi);
  static Curve kink(double half_range = 10.0);

  CurveKind kind() const { return kind_; }
  double half_range() const { return half_range_; }
  double delta() const { return delta_; }
  const RateFunction* rate() const { return rate_ ? &*rate_ : nullptr; }
  bool is_polar() const { return kind_ == CurveKind::qcurve || kind_ == CurveKind::circle; }

  /// r(t) for 0 <= t <= B. Closed form for poly and circle, quadrature
  /// otherwise. For the kink this is |q(t)|.
  double radius(double t) const;
  /// r(t) - 1 with relative accuracy, also for very small t.
  double radius_excess(double t) const;
  /// r(t) from the quadrature table regardless of closed forms.
  double radius_by_quadrature(double t) const;
  /// dr/dt at 0 <= t <= B (g(t) for rate-built curves).
  double radial_rate(double t) const;
  /// sign(t) * radial_rate(|t|): the "g scale" of a parameter.
  double signed_rate(double t) const;

  PlanarPoint point(double t) const;
  /// q(t) - q(0), evaluated without cancellation near t = 0.
  PlanarPoint offset(double t) const;
  CurveJet jet(double t) const;
  double speed(double t) const;
  /// Signed arc length from q(0) to q(t).
  double arc_length(double t) const;

 private:
  Curve() = default;
  void check_parameter(double t) const;
  double polar_excess(double a) const;

  CurveKind kind_ = CurveKind::qcurve;
  std::optional<RateFunction> rate_;
  double delta_ = 0.0;
  double half_range_ = 0.0;
  std::shared_ptr<const quad::CumulativeIntegral> table_;
};

}  // namespace pml
