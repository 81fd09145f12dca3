#include "pml/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pml {

namespace {

constexpr double kTinyValue = 1e-300;
constexpr double kArgumentGuard = 1e-150;
constexpr double kDefaultRangeFraction = 0.9;

[[noreturn]] void domain_fail(const std::string& what) { throw std::domain_error(what); }

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << name << " must be a positive finite number, got " << value;
    domain_fail(os.str());
  }
}

void require_cap(double B, double b) {
  if (!(B <= kMaxHalfRange)) {
    std::ostringstream os;
    os << "b = " << b << " gives B = f(b) = " << B << " > pi/2";
    domain_fail(os.str());
  }
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::poly:
      return "poly";
    case Family::log:
      return "log";
    case Family::exp:
      return "exp";
    case Family::custom:
      return "custom";
  }
  return "custom";
}

Family parse_family(std::string_view name) {
  if (name == "poly") return Family::poly;
  if (name == "log") return Family::log;
  if (name == "exp") return Family::exp;
  throw std::invalid_argument("unknown rate family '" + std::string(name) + "'");
}

RateFunction make_poly(double gamma, double b) {
  require_positive(gamma, "gamma");
  require_positive(b, "b");
  RateFunction rf;
  rf.family_ = Family::poly;
  rf.gamma_ = gamma;
  rf.b_ = b;
  rf.B_ = std::pow(b, gamma);
  rf.y_floor_ = std::max(kArgumentGuard, std::pow(kTinyValue, 1.0 / gamma));
  rf.name_ = "poly";
  require_cap(rf.B_, b);
  return rf;
}

RateFunction make_log(double gamma, double b) {
  require_positive(gamma, "gamma");
  if (!(b > 0.0 && b < 1.0)) {
    std::ostringstream os;
    os << "b must lie in (0, 1) for the log family, got " << b;
    domain_fail(os.str());
  }
  RateFunction rf;
  rf.family_ = Family::log;
  rf.gamma_ = gamma;
  rf.b_ = b;
  rf.B_ = std::pow(-std::log(b), -gamma);
  rf.y_floor_ = kArgumentGuard;
  rf.name_ = "log";
  require_cap(rf.B_, b);
  return rf;
}

RateFunction make_exp(double gamma, double b) {
  require_positive(gamma, "gamma");
  require_positive(b, "b");
  RateFunction rf;
  rf.family_ = Family::exp;
  rf.gamma_ = gamma;
  rf.b_ = b;
  rf.B_ = std::exp(-std::pow(b, -gamma));
  // smallest y with f(y) >= 1e-300
  rf.y_floor_ = std::pow(-std::log(kTinyValue), -1.0 / gamma);
  rf.name_ = "exp";
  require_cap(rf.B_, b);
  if (!(rf.B_ > 0.0)) domain_fail("b is below the exp-family underflow floor");
  return rf;
}

RateFunction make_custom(RateFunction::Fn f, RateFunction::Fn g, double b, std::string name) {
  if (!f || !g) throw std::invalid_argument("custom rate function needs both f and g");
  require_positive(b, "b");
  RateFunction rf;
  rf.family_ = Family::custom;
  rf.gamma_ = 1.0;
  rf.b_ = b;
  rf.B_ = f(b);
  if (!(rf.B_ > 0.0) || !std::isfinite(rf.B_)) domain_fail("custom f(b) must be positive and finite");
  require_cap(rf.B_, b);
  rf.y_floor_ = 0.0;
  rf.name_ = std::move(name);
  rf.custom_ = std::make_shared<const std::pair<RateFunction::Fn, RateFunction::Fn>>(std::move(f), std::move(g));
  return rf;
}

double default_b(Family family, double gamma) {
  require_positive(gamma, "gamma");
  const double target = kDefaultRangeFraction * kMaxHalfRange;
  switch (family) {
    case Family::poly:
      return std::pow(target, 1.0 / gamma);
    case Family::log:
      return std::exp(-std::pow(target, -1.0 / gamma));
    case Family::exp:
      return 1.0;
    case Family::custom:
      break;
  }
  throw std::invalid_argument("custom rate functions have no default b");
}

RateFunction make_rate(Family family, double gamma, double b) {
  switch (family) {
    case Family::poly:
      return make_poly(gamma, b);
    case Family::log:
      return make_log(gamma, b);
    case Family::exp:
      return make_exp(gamma, b);
    case Family::custom:
      break;
  }
  throw std::invalid_argument("custom rate functions must be built with make_custom");
}

double RateFunction::f(double y) const {
  if (!(y >= 0.0) || y > b_ * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "f evaluated at y = " << y << " outside [0, " << b_ << "]";
    domain_fail(os.str());
  }
  if (family_ == Family::custom) return custom_->first(y);
  if (y == 0.0 || y < y_floor_) return 0.0;
  switch (family_) {
    case Family::poly:
      return gamma_ == 1.0 ? y : std::pow(y, gamma_);
    case Family::log:
      return std::pow(-std::log(y), -gamma_);
    case Family::exp:
      return std::exp(-std::pow(y, -gamma_));
    case Family::custom:
      break;
  }
  return 0.0;
}

double RateFunction::g(double x) const {
  if (!(x >= 0.0) || x > B_ * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "g evaluated at x = " << x << " outside [0, " << B_ << "]";
    domain_fail(os.str());
  }
  if (family_ == Family::custom) return custom_->second(x);
  if (x == 0.0) return 0.0;
  switch (family_) {
    case Family::poly:
      return gamma_ == 1.0 ? x : std::pow(x, 1.0 / gamma_);
    case Family::log:
      return std::exp(-std::pow(x, -1.0 / gamma_));
    case Family::exp:
      return std::pow(-std::log(x), -1.0 / gamma_);
    case Family::custom:
      break;
  }
  return 0.0;
}

double RateFunction::dg(double x) const {
  const double inv = 1.0 / gamma_;
  switch (family_) {
    case Family::poly:
      if (x == 0.0) return inv > 1.0 ? 0.0 : (inv == 1.0 ? 1.0 : INFINITY);
      return inv * std::pow(x, inv - 1.0);
    case Family::log: {
      const double gx = g(x);
      if (gx == 0.0) return 0.0;
      return gx * inv * std::pow(x, -inv - 1.0);
    }
    case Family::exp:
      if (x == 0.0) return INFINITY;
      return inv * std::pow(-std::log(x), -inv - 1.0) / x;
    case Family::custom: {
      const double h = 1e-6 * std::max(x, 1e-3);
      const double lo = std::max(0.0, x - h);
      const double hi = std::min(B_, x + h);
      return (g(hi) - g(lo)) / (hi - lo);
    }
  }
  return 0.0;
}

ValidationReport validate(const RateFunction& rf, int grid_size) {
  if (grid_size < 16) throw std::invalid_argument("grid_size must be at least 16");
  ValidationReport report;
  constexpr double kRoundTripTolerance = 1e-12;

  if (rf.f(0.0) != 0.0) {
    report.passed = false;
    report.messages.emplace_back("f(0) != 0");
  }
  if (rf.g(0.0) != 0.0) {
    report.passed = false;
    report.messages.emplace_back("g(0) != 0");
  }
  if (!(rf.B() <= kMaxHalfRange)) {
    report.passed = false;
    report.messages.emplace_back("B exceeds pi/2");
  }

  const double b = rf.b();
  const auto node = [&](int i) { return i == grid_size - 1 ? b : b * i / (grid_size - 1); };
  double previous = rf.f(0.0);
  for (int i = 1; i < grid_size; ++i) {
    const double y = node(i);
    const double fy = rf.f(y);
    if (y >= rf.y_floor() && !(fy > previous)) report.monotonicity_violations.push_back(y);
    previous = fy;

    if (y < rf.y_floor()) continue;
    double back = NAN;
    if (fy >= 0.0 && fy <= rf.B() * (1.0 + 1e-12)) back = rf.g(fy);
    const double err = std::isfinite(back) ? std::abs(back - y) / (1.0 + y) : INFINITY;
    if (!(err <= report.worst_round_trip)) {
      report.worst_round_trip = err;
      report.worst_round_trip_at = y;
    }
  }
  if (!report.monotonicity_violations.empty()) {
    report.passed = false;
    std::ostringstream os;
    os << "f not strictly increasing; first violation at y = " << report.monotonicity_violations.front();
    report.messages.push_back(os.str());
  }
  if (!(report.worst_round_trip <= kRoundTripTolerance)) {
    report.passed = false;
    std::ostringstream os;
    os << "round trip |g(f(y)) - y| / (1 + y) = " << report.worst_round_trip << " at y = "
       << report.worst_round_trip_at;
    report.messages.push_back(os.str());
  }
  return report;
}

}  // namespace pml
