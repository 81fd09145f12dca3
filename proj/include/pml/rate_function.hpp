#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pml {

enum class Family { poly, log, exp, custom };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

/// Largest parameter half-range a curve may use; keeps the polar
/// parametrization single-valued on [-B, B].
inline constexpr double kMaxHalfRange = 1.5707963267948966;

/// A strictly increasing f: [0,b] -> [0,B] with f(0) = 0, paired with its
/// inverse g = f^{-1}: [0,B] -> [0,b].
///
/// Built-in families evaluate in closed form. Custom functions are supplied by
/// the caller as an (f, g) pair and are never inverted numerically.
/// Immutable after construction.
class RateFunction {
 public:
  using Fn = std::function<double(double)>;

  Family family() const { return family_; }
  double gamma() const { return gamma_; }
  double b() const { return b_; }
  double B() const { return B_; }
  const std::string& name() const { return name_; }

  /// Below this argument f returns exactly 0 (double underflow guard).
  double y_floor() const { return y_floor_; }

  double f(double y) const;
  double g(double x) const;
  /// Derivative of g; finite differences for custom functions.
  double dg(double x) const;

 private:
  friend RateFunction make_poly(double gamma, double b);
  friend RateFunction make_log(double gamma, double b);
  friend RateFunction make_exp(double gamma, double b);
  friend RateFunction make_custom(Fn f, Fn g, double b, std::string name);

  RateFunction() = default;

  Family family_ = Family::poly;
  double gamma_ = 1.0;
  double b_ = 1.0;
  double B_ = 1.0;
  double y_floor_ = 0.0;
  std::string name_;
  std::shared_ptr<const std::pair<Fn, Fn>> custom_;
};

/// f(y) = y^gamma. Throws std::domain_error unless gamma, b > 0 and
/// b^gamma <= pi/2.
RateFunction make_poly(double gamma, double b);
/// f(y) = (-log y)^(-gamma) on 0 < b < 1.
RateFunction make_log(double gamma, double b);
/// f(y) = exp(-y^(-gamma)).
RateFunction make_exp(double gamma, double b);
RateFunction make_custom(RateFunction::Fn f, RateFunction::Fn g, double b,
                         std::string name = "custom");

/// Family default for b: the b whose B sits 10% below the pi/2 cap, or b = 1
/// for the exp family, whose range never reaches the cap.
double default_b(Family family, double gamma);
RateFunction make_rate(Family family, double gamma, double b);

struct ValidationReport {
  bool passed = true;
  std::vector<double> monotonicity_violations;  // y where f(y) >= f(next y)
  double worst_round_trip = 0.0;                // max |g(f(y)) - y| / (1 + y)
  double worst_round_trip_at = 0.0;
  std::vector<std::string> messages;
};

/// Checks f(0) = g(0) = 0, strict monotonicity and the g(f(y)) round trip on
/// a uniform grid over [0, b]. Requires grid_size >= 16.
ValidationReport validate(const RateFunction& rf, int grid_size);

}  // namespace pml
