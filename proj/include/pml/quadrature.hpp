#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace pml::quad {

namespace detail {

template <class F>
double simpson_recurse(F& f, double a, double fa, double m, double fm, double b, double fb,
                       double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  // interval no longer splittable in double precision
  if (!(a < lm && lm < m && m < rm && rm < b)) return whole;
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_recurse(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction. `tol` is an absolute error
/// target for the whole interval; recursion stops at `max_depth` halvings.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48) {
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, tol, max_depth);
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_recurse(f, a, fa, m, fm, b, fb, whole, tol, max_depth);
}

/// G(t) = integral of a nonnegative nondecreasing integrand over [0, t] for
/// t in [0, upper].
///
/// Values at Chebyshev-Lobatto nodes are tabulated once; a query adds one
/// short adaptive Simpson piece from the nearest node below. Below the first
/// node the integral is taken in u = log x, which keeps relative accuracy for
/// arbitrarily small t.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(std::function<double(double)> integrand, double upper, int nodes = 4096,
                     double tolerance = 1e-12);

  double upper() const { return upper_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }

  /// Absolute error about tolerance / 10.
  double operator()(double t) const;
  /// Relative error about `relative`, for any t > 0.
  double relative(double t, double relative = 1e-13) const;

 private:
  double head(double t, double abs_tol) const;
  double piece(int node, double t, double abs_tol) const;
  int node_below(double t) const;

  std::function<double(double)> integrand_;
  double upper_ = 0.0;
  double tolerance_ = 1e-12;
  std::vector<double> nodes_;
  std::vector<double> values_;
};

}  // namespace pml::quad
