#include "pml/curve.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pml {

namespace {

constexpr int kTableNodes = 4096;
constexpr double kTableTolerance = 1e-12;
constexpr double kArcTolerance = 1e-11;

double sign_of(double t) { return t < 0.0 ? -1.0 : 1.0; }

}  // namespace

std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::qcurve:
      return "qcurve";
    case CurveKind::simple_qcurve:
      return "simple_qcurve";
    case CurveKind::circle:
      return "circle";
    case CurveKind::kink:
      return "kink";
  }
  return "qcurve";
}

Curve Curve::qcurve(RateFunction rate) {
  Curve c;
  c.kind_ = CurveKind::qcurve;
  c.half_range_ = rate.B();
  c.rate_ = std::move(rate);
  const RateFunction rf = *c.rate_;
  c.table_ = std::make_shared<const quad::CumulativeIntegral>([rf](double x) { return rf.g(x); }, c.half_range_,
                                                              kTableNodes, kTableTolerance);
  return c;
}

Curve Curve::simple_qcurve(RateFunction rate) {
  const bool sublinear = (rate.family() == Family::poly && rate.gamma() > 1.0) || rate.family() == Family::exp ||
                         rate.family() == Family::custom;
  if (!sublinear)
    throw std::domain_error("simple_qcurve needs f(y) = o(y) (poly with gamma > 1, exp, or custom)");
  Curve c = qcurve(std::move(rate));
  c.kind_ = CurveKind::simple_qcurve;
  return c;
}

Curve Curve::circle(double delta, double half_range) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::domain_error("circle offset delta must be >= 0");
  if (!(half_range > 0.0 && half_range <= std::numbers::pi))
    throw std::domain_error("circle half range must lie in (0, pi]");
  Curve c;
  c.kind_ = CurveKind::circle;
  c.delta_ = delta;
  c.half_range_ = half_range;
  return c;
}

Curve Curve::kink(double half_range) {
  if (!(half_range > 0.0) || !std::isfinite(half_range)) throw std::domain_error("kink half range must be positive");
  Curve c;
  c.kind_ = CurveKind::kink;
  c.half_range_ = half_range;
  return c;
}

void Curve::check_parameter(double t) const {
  if (!(std::abs(t) <= half_range_ * (1.0 + 1e-12))) {
    std::ostringstream os;
    os << "curve parameter t = " << t << " outside [-" << half_range_ << ", " << half_range_ << "]";
    throw std::domain_error(os.str());
  }
}

double Curve::polar_excess(double a) const {
  if (kind_ == CurveKind::circle) {
    const double c = std::cos(a);
    const double s_half = std::sin(0.5 * a);
    const double root = std::sqrt(c * c * delta_ * delta_ + 2.0 * delta_ + 1.0);
    return 4.0 * delta_ * s_half * s_half / (root + c * delta_ + 1.0);
  }
  const RateFunction& rf = *rate_;
  if (rf.family() == Family::poly) {
    const double gamma = rf.gamma();
    return gamma / (1.0 + gamma) * std::pow(a, (1.0 + gamma) / gamma);
  }
  return table_->relative(a);
}

double Curve::radius(double t) const {
  if (t < 0.0) throw std::domain_error("radius is defined for t >= 0");
  check_parameter(t);
  switch (kind_) {
    case CurveKind::circle: {
      const double c = std::cos(t);
      return std::sqrt(c * c * delta_ * delta_ + 2.0 * delta_ + 1.0) - c * delta_;
    }
    case CurveKind::kink:
      return std::hypot(1.0 + t, t);
    case CurveKind::qcurve:
    case CurveKind::simple_qcurve:
      if (rate_->family() == Family::poly) return 1.0 + polar_excess(t);
      return 1.0 + (*table_)(std::min(t, half_range_));
  }
  return 1.0;
}

double Curve::radius_excess(double t) const {
  if (t < 0.0) throw std::domain_error("radius is defined for t >= 0");
  check_parameter(t);
  if (kind_ == CurveKind::kink) return std::hypot(1.0 + t, t) - 1.0;
  return polar_excess(std::min(t, half_range_));
}

double Curve::radius_by_quadrature(double t) const {
  if (!table_) return radius(t);
  if (t < 0.0) throw std::domain_error("radius is defined for t >= 0");
  check_parameter(t);
  return 1.0 + (*table_)(std::min(t, half_range_));
}

double Curve::radial_rate(double t) const {
  if (t < 0.0) throw std::domain_error("radial rate is defined for t >= 0");
  check_parameter(t);
  switch (kind_) {
    case CurveKind::circle: {
      const double c = std::cos(t);
      const double s = std::sin(t);
      const double root = std::sqrt(c * c * delta_ * delta_ + 2.0 * delta_ + 1.0);
      return delta_ * s - c * s * delta_ * delta_ / root;
    }
    case CurveKind::kink:
      return (1.0 + 2.0 * t) / std::hypot(1.0 + t, t);
    case CurveKind::qcurve:
    case CurveKind::simple_qcurve:
      return rate_->g(std::min(t, half_range_));
  }
  return 0.0;
}

double Curve::signed_rate(double t) const { return sign_of(t) * radial_rate(std::abs(t)); }

PlanarPoint Curve::point(double t) const {
  check_parameter(t);
  const double a = std::min(std::abs(t), half_range_);
  const double sg = sign_of(t);
  switch (kind_) {
    case CurveKind::qcurve:
    case CurveKind::circle: {
      const double r = radius(a);
      return {r * std::cos(a), sg * r * std::sin(a)};
    }
    case CurveKind::simple_qcurve:
      return {1.0 + a * rate_->g(a), sg * a};
    case CurveKind::kink:
      return {1.0 + a, sg * a};
  }
  return {};
}

PlanarPoint Curve::offset(double t) const {
  check_parameter(t);
  const double a = std::min(std::abs(t), half_range_);
  const double sg = sign_of(t);
  switch (kind_) {
    case CurveKind::qcurve:
    case CurveKind::circle: {
      const double e = polar_excess(a);
      const double s_half = std::sin(0.5 * a);
      return {e * std::cos(a) - 2.0 * s_half * s_half, sg * (1.0 + e) * std::sin(a)};
    }
    case CurveKind::simple_qcurve:
      return {a * rate_->g(a), sg * a};
    case CurveKind::kink:
      return {a, sg * a};
  }
  return {};
}

CurveJet Curve::jet(double t) const {
  check_parameter(t);
  const double a = std::min(std::abs(t), half_range_);
  const double sg = sign_of(t);
  CurveJet j;
  switch (kind_) {
    case CurveKind::qcurve:
    case CurveKind::circle: {
      const double r = radius(a);
      const double rd = radial_rate(a);
      const double c = std::cos(a);
      const double s = std::sin(a);
      j.point = {r * c, sg * r * s};
      j.velocity = {sg * (rd * c - r * s), rd * s + r * c};
      j.radial = sg * r * rd;
      break;
    }
    case CurveKind::simple_qcurve: {
      const RateFunction& rf = *rate_;
      const double ga = rf.g(a);
      // a g'(a) -> 0 as a -> 0 for every admissible rate
      const double slope = a == 0.0 ? 0.0 : ga + a * rf.dg(a);
      j.point = {1.0 + a * ga, sg * a};
      j.velocity = {sg * slope, 1.0};
      j.radial = j.point.x * j.velocity.x + j.point.y;
      break;
    }
    case CurveKind::kink: {
      const double side = t == 0.0 ? 0.0 : sg;
      j.point = {1.0 + a, sg * a};
      j.velocity = {side, 1.0};
      j.radial = j.point.x * side + j.point.y;
      break;
    }
  }
  return j;
}

double Curve::speed(double t) const {
  const CurveJet j = jet(t);
  if (kind_ == CurveKind::kink) return std::sqrt(2.0);
  return std::hypot(j.velocity.x, j.velocity.y);
}

double Curve::arc_length(double t) const {
  check_parameter(t);
  const double a = std::min(std::abs(t), half_range_);
  if (a == 0.0) return 0.0;
  double length = 0.0;
  if (kind_ == CurveKind::kink) {
    length = std::sqrt(2.0) * a;
  } else if (kind_ == CurveKind::circle && delta_ == 0.0) {
    length = a;
  } else {
    length = quad::adaptive_simpson([this](double u) { return speed(u); }, 0.0, a, kArcTolerance, 40);
  }
  return sign_of(t) * length;
}

}  // namespace pml
