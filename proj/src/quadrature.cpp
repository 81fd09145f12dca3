#include "pml/quadrature.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace pml::quad {

namespace {
// integrand mass below t * exp(-kHeadSpan) is below t * g(t) * 4e-18
constexpr double kHeadSpan = 40.0;
constexpr double kSegmentRelative = 1e-14;
}  // namespace

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> integrand, double upper,
                                       int nodes, double tolerance)
    : integrand_(std::move(integrand)), upper_(upper), tolerance_(tolerance) {
  if (!(upper > 0.0)) throw std::invalid_argument("integration range must be positive");
  if (nodes < 3) throw std::invalid_argument("need at least 3 table nodes");
  nodes_.resize(nodes);
  values_.resize(nodes);
  for (int j = 0; j < nodes; ++j)
    nodes_[j] = 0.5 * upper * (1.0 - std::cos(std::numbers::pi * j / (nodes - 1)));
  nodes_.front() = 0.0;
  nodes_.back() = upper;

  const double per_segment = tolerance / nodes;
  values_[0] = 0.0;
  values_[1] = head(nodes_[1], std::min(per_segment, kSegmentRelative * nodes_[1] * integrand_(nodes_[1])));
  for (int j = 2; j < nodes; ++j) {
    const double width = nodes_[j] - nodes_[j - 1];
    const double tol = std::max(std::min(per_segment, kSegmentRelative * width * integrand_(nodes_[j])), 1e-300);
    values_[j] = values_[j - 1] + adaptive_simpson(integrand_, nodes_[j - 1], nodes_[j], tol, 30);
  }
}

int CumulativeIntegral::node_below(double t) const {
  const int n = node_count();
  const double c = std::clamp(1.0 - 2.0 * t / upper_, -1.0, 1.0);
  int j = static_cast<int>(std::acos(c) * (n - 1) / std::numbers::pi);
  j = std::clamp(j, 0, n - 1);
  while (j + 1 < n && nodes_[j + 1] <= t) ++j;
  while (j > 0 && nodes_[j] > t) --j;
  return j;
}

double CumulativeIntegral::head(double t, double abs_tol) const {
  if (t <= 0.0) return 0.0;
  const double top = integrand_(t);
  if (top == 0.0) return 0.0;
  const double log_t = std::log(t);
  const auto in_log_space = [this, t](double u) {
    const double x = std::min(std::exp(u), t);
    return integrand_(x) * x;
  };
  return adaptive_simpson(in_log_space, log_t - kHeadSpan, log_t, std::max(abs_tol, 1e-300), 60);
}

double CumulativeIntegral::piece(int node, double t, double abs_tol) const {
  if (t == nodes_[node]) return 0.0;
  return adaptive_simpson(integrand_, nodes_[node], t, std::max(abs_tol, 1e-300), 30);
}

double CumulativeIntegral::operator()(double t) const {
  if (t < 0.0 || t > upper_ * (1.0 + 1e-12)) throw std::domain_error("cumulative integral queried beyond its range");
  if (t == 0.0) return 0.0;
  t = std::min(t, upper_);
  const int j = node_below(t);
  const double tol = 0.1 * tolerance_;
  if (j == 0) return head(t, tol);
  return values_[j] + piece(j, t, tol);
}

double CumulativeIntegral::relative(double t, double relative) const {
  if (t < 0.0 || t > upper_ * (1.0 + 1e-12)) throw std::domain_error("cumulative integral queried beyond its range");
  if (t == 0.0) return 0.0;
  t = std::min(t, upper_);
  const int j = node_below(t);
  const double bound = t * integrand_(t);
  if (bound == 0.0) return 0.0;
  const double tol = std::min(0.1 * tolerance_, relative * bound);
  if (j == 0) return head(t, tol);
  return values_[j] + piece(j, t, tol);
}

}  // namespace pml::quad
