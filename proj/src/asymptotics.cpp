#include "pml/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pml {

namespace {

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::domain_error("sigma must be positive");
}

}  // namespace

double phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double theorem1_limit(double s, double sigma) {
  if (!(s >= 0.0)) throw std::domain_error("theorem1_limit needs s >= 0");
  require_sigma(sigma);
  return phi(s / sigma);
}

double poly_limit_cdf(double s, double gamma, double sigma) {
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
  require_sigma(sigma);
  if (s == 0.0) return 0.5;
  const double magnitude = std::pow(std::abs(s), 1.0 / gamma);
  return phi((s < 0.0 ? -magnitude : magnitude) / sigma);
}

CdfInterval log_limit_cdf(double s) {
  if (s < -1.0) return {0.0, 0.0};
  if (s == -1.0) return {0.0, 0.5};
  if (s < 1.0) return {0.5, 0.5};
  if (s == 1.0) return {0.5, 1.0};
  return {1.0, 1.0};
}

MassSplit exp_limit_masses(double c, double sigma) {
  if (!(c > 0.0)) throw std::domain_error("c must be positive");
  require_sigma(sigma);
  const double p = phi(c / sigma);
  // 1 - p_c through the upper tail keeps precision for large c / sigma
  const double tail = phi(-c / sigma);
  return {tail, p - tail, tail};
}

CdfInterval LimitLaw::cdf(double s) const {
  switch (kind) {
    case LimitKind::theorem1: {
      require_sigma(sigma);
      const double v = phi(s / sigma);
      return {v, v};
    }
    case LimitKind::poly_T: {
      const double v = poly_limit_cdf(s, gamma, sigma);
      return {v, v};
    }
    case LimitKind::log_pm1:
      return log_limit_cdf(s);
    case LimitKind::exp_mass: {
      const MassSplit m = exp_limit_masses(c, sigma);
      if (s < 0.0) return {m.minus_infinity, m.minus_infinity};
      if (s == 0.0) return {m.minus_infinity, m.minus_infinity + m.zero};
      return {m.minus_infinity + m.zero, m.minus_infinity + m.zero};
    }
  }
  return {};
}

}  // namespace pml
