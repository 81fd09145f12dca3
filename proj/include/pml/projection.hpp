#pragma once

#include <vector>

#include "pml/curve.hpp"

namespace pml {

struct ProjectionResult {
  double t_star = 0.0;
  PlanarPoint point;
  double sq_dist = 0.0;
  int multiplicity = 1;
  std::vector<double> all_minimizers;  // filled when multiplicity > 1
  bool at_boundary = false;            // t_star = -B or B
  bool degenerate = false;             // loss constant over the whole curve
};

/// Squared distance l(t) = |q(t) - z|^2.
double loss(const Curve& curve, PlanarPoint z, double t);
/// dl/dt = 2 (q(t) - z) . q'(t).
double loss_derivative(const Curve& curve, PlanarPoint z, double t);

/// Global nearest-point projection onto a fixed curve.
///
/// The loss slope is scanned on a uniform grid (2048 cells, t = 0 is a node)
/// and every descending-to-ascending sign change is refined by bisection on
/// the slope sign. Brackets ending at t = 0 are bisected in log t down to
/// 1e-300, so minimizers such as t ~ exp(-200) are resolved. Competing
/// minimizers are compared through l(t) - l(0), which is evaluated without
/// cancellation. Ties within 1e-10 (1 + l) resolve to the smallest t.
class Projector {
 public:
  explicit Projector(Curve curve, int scan_cells = 2048);

  const Curve& curve() const { return curve_; }
  ProjectionResult operator()(PlanarPoint z) const;

 private:
  struct Node {
    double t;
    CurveJet jet;
  };

  ProjectionResult project_kink(PlanarPoint z) const;
  double half_slope(PlanarPoint z, double t) const;
  double refine(PlanarPoint z, double lo, double hi) const;
  double refine_near_zero(PlanarPoint z, double direction, double reach) const;
  int scan_beside(PlanarPoint z, double edge, double toward, double toward_slope, std::vector<double>& roots) const;
  ProjectionResult select(PlanarPoint z, std::vector<double> candidates, bool degenerate) const;

  Curve curve_;
  std::vector<Node> nodes_;
};

ProjectionResult project(const Curve& curve, PlanarPoint z);

/// Brute-force reference: l on a uniform symmetric grid of n_grid points plus
/// a parabolic step around each grid-local minimum. Independent of Projector.
class GridOracle {
 public:
  GridOracle(Curve curve, int n_grid);
  ProjectionResult operator()(PlanarPoint z) const;
  double spacing() const { return spacing_; }

 private:
  Curve curve_;
  std::vector<double> ts_;
  std::vector<PlanarPoint> points_;
  double spacing_ = 0.0;
};

ProjectionResult project_grid_oracle(const Curve& curve, PlanarPoint z, int n_grid);

}  // namespace pml
