#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pml/curve.hpp"

using namespace pml;

namespace {

// Frozen from 40-digit mpmath evaluations.
constexpr double kPolyPointX = 0.999667909398066463747;
constexpr double kPolyPointY = 0.202642717410962439769;
constexpr double kLogRadius = 1.00212774380063618758;      // log gamma=1, r(0.3)
constexpr double kExpRadius = 1.08512648672879406061;      // exp gamma=1, r(0.2)
constexpr double kExpTinyExcess = 4.32424537720225654351e-103;  // exp gamma=1, r(1e-100) - 1
constexpr double kPolyArc = 0.202643328089160215446;        // poly gamma=1, arc length to 0.2

std::vector<Curve> all_curves() {
  return {Curve::qcurve(make_poly(1.0, 1.0)),      Curve::qcurve(make_poly(0.5, 2.0)),
          Curve::qcurve(make_poly(2.0, 1.1)),      Curve::qcurve(make_log(1.0, 0.45)),
          Curve::qcurve(make_exp(1.0, 1.0)),       Curve::simple_qcurve(make_poly(2.0, 1.0)),
          Curve::simple_qcurve(make_exp(1.0, 1.0)), Curve::circle(0.3),
          Curve::kink()};
}

}  // namespace

TEST_CASE("radius examples") {
  const Curve poly = Curve::qcurve(make_poly(1.0, 0.5));
  CHECK(poly.radius(0.2) == doctest::Approx(1.02).epsilon(1e-15));
  for (const Curve& c : all_curves()) CHECK(c.radius(0.0) == 1.0);
  CHECK(Curve::circle(0.3).radius(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(poly.radius(-0.1), std::domain_error);
  CHECK_THROWS_AS(poly.radius(0.6), std::domain_error);
}

TEST_CASE("quadrature radii against high-precision values") {
  const Curve lg = Curve::qcurve(make_log(1.0, 0.45));
  CHECK(std::abs(lg.radius(0.3) - kLogRadius) <= 1e-12);
  const Curve ex = Curve::qcurve(make_exp(1.0, 1.0));
  CHECK(std::abs(ex.radius(0.2) - kExpRadius) <= 1e-12);
  CHECK(ex.radius_excess(1e-100) == doctest::Approx(kExpTinyExcess).epsilon(1e-9));
}

TEST_CASE("quadrature agrees with the poly closed form") {
  std::mt19937_64 rng(7);
  for (double gamma : {0.5, 1.0, 2.0}) {
    const Curve c = Curve::qcurve(make_rate(Family::poly, gamma, default_b(Family::poly, gamma)));
    std::uniform_real_distribution<double> u(0.0, c.half_range());
    for (int i = 0; i < 100; ++i) {
      const double t = u(rng);
      CHECK(std::abs(c.radius_by_quadrature(t) - c.radius(t)) <= 1e-12);
    }
  }
}

TEST_CASE("points") {
  for (const Curve& c : all_curves()) CHECK(c.point(0.0) == PlanarPoint{1.0, 0.0});
  const PlanarPoint p = Curve::qcurve(make_poly(1.0, 0.5)).point(0.2);
  CHECK(p.x == doctest::Approx(kPolyPointX).epsilon(1e-15));
  CHECK(p.y == doctest::Approx(kPolyPointY).epsilon(1e-15));
  const PlanarPoint s = Curve::simple_qcurve(make_poly(2.0, 0.5)).point(0.01);
  CHECK(s.x == doctest::Approx(1.001).epsilon(1e-15));
  CHECK(s.y == 0.01);
  CHECK(Curve::kink().point(-2.0) == PlanarPoint{3.0, -2.0});
  CHECK_THROWS_AS(Curve::kink().point(10.5), std::domain_error);
}

TEST_CASE("simple construction is limited to f(y) = o(y)") {
  CHECK_THROWS_AS(Curve::simple_qcurve(make_log(1.0, 0.4)), std::domain_error);
  CHECK_THROWS_AS(Curve::simple_qcurve(make_poly(1.0, 0.5)), std::domain_error);
  CHECK_THROWS_AS(Curve::simple_qcurve(make_poly(0.5, 0.5)), std::domain_error);
}

TEST_CASE("mirror symmetry is exact") {
  std::mt19937_64 rng(11);
  for (const Curve& c : all_curves()) {
    std::uniform_real_distribution<double> u(0.0, c.half_range());
    for (int i = 0; i < 50; ++i) {
      const double t = u(rng);
      const PlanarPoint a = c.point(t);
      const PlanarPoint b = c.point(-t);
      CHECK(a.x == b.x);
      CHECK(a.y == -b.y);
    }
  }
}

TEST_CASE("radius is strictly increasing") {
  // log-family r - 1 is ~1e-80 near the origin, so strictness is checked on r - 1
  for (const Curve& c : all_curves()) {
    if (c.kind() == CurveKind::kink) continue;
    double prev_excess = c.radius_excess(0.0);
    double prev = c.radius(0.0);
    for (int k = 1; k <= 256; ++k) {
      const double t = c.half_range() * k / 256.0;
      const double excess = c.radius_excess(t);
      const double r = c.radius(t);
      CHECK(excess > prev_excess);
      CHECK(r >= prev);
      prev_excess = excess;
      prev = r;
    }
  }
}

TEST_CASE("offset matches point minus q(0) and keeps precision") {
  for (const Curve& c : all_curves()) {
    for (double t : {-0.3, -0.01, 0.02, 0.2}) {
      const PlanarPoint d = c.offset(t);
      const PlanarPoint p = c.point(t);
      CHECK(d.x == doctest::Approx(p.x - 1.0).epsilon(1e-9));
      CHECK(d.y == doctest::Approx(p.y).epsilon(1e-12));
    }
  }
  // poly gamma = 1: (1 + t^2/2) cos t - 1 = -t^4/4 + O(t^6)
  const Curve poly = Curve::qcurve(make_poly(1.0, 0.5));
  const double t = 1e-5;
  CHECK(poly.offset(t).x == doctest::Approx(-0.25 * std::pow(t, 4)).epsilon(1e-6));
}

TEST_CASE("velocity matches finite differences") {
  for (const Curve& c : all_curves()) {
    for (double u : {-0.8, -0.1, 0.06, 0.5}) {
      const double t = u * c.half_range();
      const double h = 1e-6;
      const PlanarPoint fd = 1.0 / (2.0 * h) * (c.point(t + h) - c.point(t - h));
      const CurveJet j = c.jet(t);
      CHECK(j.velocity.x == doctest::Approx(fd.x).epsilon(1e-6).scale(1.0));
      CHECK(j.velocity.y == doctest::Approx(fd.y).epsilon(1e-6).scale(1.0));
      CHECK(j.radial == doctest::Approx(dot(j.point, j.velocity)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("speed") {
  const Curve poly = Curve::qcurve(make_poly(1.0, 0.5));
  CHECK(poly.speed(0.001) >= 1.0);
  CHECK(poly.speed(0.001) <= 1.000002);
  double worst = 0.0;
  for (int k = -100; k <= 100; ++k) worst = std::max(worst, std::abs(poly.speed(0.01 * k / 100.0) - 1.0));
  CHECK(worst <= 1e-3);
  CHECK(Curve::circle(0.3).speed(0.0) == doctest::Approx(1.0).epsilon(1e-15));

  // gamma = 0.5: r = 1 + t^3/3, g = t^2
  const Curve flat = Curve::qcurve(make_poly(0.5, 2.0));
  const double t = 0.01;
  const double r = 1.0 + t * t * t / 3.0;
  const double g = t * t;
  const double expected = std::hypot(g * std::cos(t) - r * std::sin(t), g * std::sin(t) + r * std::cos(t));
  CHECK(flat.speed(t) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(Curve::kink().speed(3.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("arc length") {
  for (const Curve& c : all_curves()) CHECK(c.arc_length(0.0) == 0.0);
  CHECK(Curve::circle(0.0).arc_length(0.3) == doctest::Approx(0.3).epsilon(1e-14));
  const Curve poly = Curve::qcurve(make_poly(1.0, 0.5));
  CHECK(std::abs(poly.arc_length(0.2) - kPolyArc) <= 1e-10);
  CHECK(poly.arc_length(-0.2) == -poly.arc_length(0.2));
  CHECK(Curve::kink().arc_length(2.0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("circle radius is the distance to the shifted centre") {
  const double delta = 0.3;
  const Curve c = Curve::circle(delta);
  for (double t : {0.1, 0.7, 1.5, 2.5, std::numbers::pi}) {
    const PlanarPoint p = c.point(t);
    CHECK(std::hypot(p.x + delta, p.y) == doctest::Approx(1.0 + delta).epsilon(1e-14));
  }
}
