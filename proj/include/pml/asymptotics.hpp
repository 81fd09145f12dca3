#pragma once

namespace pml {

/// Standard normal CDF via erfc; absolute error below 1e-15.
double phi(double x);

/// Phi(s / sigma): the limit of P(t_n <= f(s / sqrt n)) for s >= 0.
double theorem1_limit(double s, double sigma);

/// CDF of the polynomial-family limit T: Phi(sgn(s) |s|^(1/gamma) / sigma).
double poly_limit_cdf(double s, double gamma, double sigma);

/// Value of a CDF that may jump: left limit and value at s. Away from jumps
/// both coincide.
struct CdfInterval {
  double left = 0.0;
  double right = 0.0;

  bool is_jump() const { return left != right; }
};

/// Two-point law with mass 1/2 at -1 and +1 (log-family limit).
CdfInterval log_limit_cdf(double s);

struct MassSplit {
  double plus_infinity = 0.0;
  double zero = 0.0;
  double minus_infinity = 0.0;
};

/// Exp-family limit with p_c = Phi(c / sigma): (1 - p_c, 2 p_c - 1, 1 - p_c).
MassSplit exp_limit_masses(double c, double sigma);

enum class LimitKind { theorem1, poly_T, log_pm1, exp_mass };

/// A closed-form limit distribution with its parameters.
struct LimitLaw {
  LimitKind kind = LimitKind::theorem1;
  double sigma = 1.0;
  double gamma = 1.0;
  double c = 1.0;

  /// CDF at s. theorem1 is extended to negative s by symmetry; exp_mass puts
  /// mass 1 - p_c at -infinity, so its CDF is 1 - p_c for s < 0 and p_c for
  /// s >= 0.
  CdfInterval cdf(double s) const;
};

}  // namespace pml
