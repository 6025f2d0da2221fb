#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "toric/potential.hpp"

using namespace toric;

namespace {
Eigen::VectorXd pt1(double x) {
  Eigen::VectorXd p(1);
  p << x;
  return p;
}
Eigen::VectorXd pt2(double x, double y) {
  Eigen::VectorXd p(2);
  p << x, y;
  return p;
}
}  // namespace

TEST_CASE("Guillemin Hessian on the interval") {
  Polytope P = Polytope::named("interval");
  // beta = 1/2: s'' = (1/2)(1/(1+x) + 1/(1-x)) = 1/(1-x^2)
  Eigen::MatrixXd H = guillemin_hessian(P, 0.5, pt1(0.3));
  CHECK(H(0, 0) == doctest::Approx(1.0 / (1.0 - 0.09)));
  CHECK_THROWS_AS(guillemin_hessian(P, 0.5, pt1(1.0)), BoundaryPoint);
}

TEST_CASE("Hessian inverse is an exact inverse") {
  for (const char* name : {"interval", "square", "square2", "simplex"}) {
    Polytope P = Polytope::named(name);
    PotentialSpec spec = PotentialSpec::guillemin(P, 0.5);
    for (const auto& x : interior_grid(P, 7)) {
      HessianPair pair = hessian_and_inverse(spec, x);
      Eigen::MatrixXd I = pair.hess * pair.inverse;
      CHECK((I - Eigen::MatrixXd::Identity(P.dim(), P.dim()))
                .cwiseAbs()
                .maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("simplex Guillemin inverse Hessian closed form") {
  // standard 2-simplex, H^{-1} = (1/beta) [[x(1-x), -xy], [-xy, y(1-y)]]
  Polytope P = Polytope::named("simplex");
  PotentialSpec spec = PotentialSpec::guillemin(P, 0.5);
  Eigen::VectorXd x = pt2(0.2, 0.3);
  HessianPair pair = hessian_and_inverse(spec, x);
  CHECK(pair.inverse(0, 0) == doctest::Approx(2.0 * 0.2 * 0.8));
  CHECK(pair.inverse(0, 1) == doctest::Approx(-2.0 * 0.2 * 0.3));
  CHECK(pair.inverse(1, 1) == doctest::Approx(2.0 * 0.3 * 0.7));
}

TEST_CASE("analytic Hessian derivative matches finite differences") {
  Polytope P = Polytope::named("square2");
  PotentialSpec spec = PotentialSpec::guillemin(P, 0.5);
  Polynomial v(2);
  v.add_term({2, 2}, 0.05);
  v.add_term({3, 0}, 0.01);
  spec.correction = v;
  Eigen::VectorXd x = pt2(0.17, -0.36);
  const double h = 1e-6;
  for (int m = 0; m < 2; ++m) {
    Eigen::VectorXd xp = x, xm = x;
    xp[m] += h;
    xm[m] -= h;
    Eigen::MatrixXd fd =
        (potential_hessian(spec, xp) - potential_hessian(spec, xm)) / (2 * h);
    Eigen::MatrixXd an = potential_hessian_derivative(spec, x, m);
    CHECK((fd - an).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("Spot validation") {
  Polytope P = Polytope::named("interval");
  PotentialSpec good = PotentialSpec::guillemin(P, 0.5);
  CHECK(validate_spot(good).pass);

  // v = -x^2 makes s'' = 1/(1-x^2) - 2 negative near the center
  PotentialSpec bad = good;
  Polynomial v(1);
  v.add_term({2}, -1.0);
  bad.correction = v;
  SpotValidation r = validate_spot(bad);
  CHECK(!r.pass);
  CHECK(r.failing_point.has_value());
  CHECK_FALSE(r.failure_reason.empty());
}

TEST_CASE("tangential facet condition catches boundary violations") {
  // On the square, v = -x^2/2 keeps the interior barely convex only where
  // the Guillemin part dominates; a strong tangential concavity along the
  // facet x = 0 must be flagged. Use v = -2 y^2 on the unit square: on the
  // facet y = 0 the tangent is x and the x-x entry stays fine, but on the
  // facet x = 0 the tangent is y and 1/(y(1-y)) - 4 dips negative at y=1/2.
  Polytope P = Polytope::named("square");
  PotentialSpec spec = PotentialSpec::guillemin(P, 1.0);
  Polynomial v(2);
  v.add_term({0, 2}, -2.0);
  spec.correction = v;
  SpotValidation r = validate_spot(spec);
  CHECK(!r.pass);
}

TEST_CASE("boundary flat directions vanish to first order on facets") {
  Polytope P = Polytope::named("square2");
  Polynomial poly(2);
  poly.add_term({1, 1}, 1.0);
  poly.add_term({0, 0}, 0.5);
  Direction d = boundary_flat_direction(P, poly);
  CHECK(d.boundary_flat);
  // sample each facet
  for (double t : {-0.9, -0.3, 0.4, 0.8}) {
    for (auto x : {pt2(1.0, t), pt2(-1.0, t), pt2(t, 1.0), pt2(t, -1.0)}) {
      CHECK(std::abs(d.delta_s(x)) < 1e-14);
      CHECK(d.delta_s.gradient_at(x).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("unimodular pushforward preserves the potential") {
  // s'(y) at the image point equals s(x): compare Hessians through the map
  Polytope P = Polytope::named("simplex");
  PotentialSpec spec = PotentialSpec::guillemin(P, 0.5);
  Polynomial v(2);
  v.add_term({2, 0}, 0.02);
  spec.correction = v;

  UnimodularMap map;
  map.matrix.resize(2, 2);
  map.matrix << 1, 1, 0, 1;
  map.translation = pt2(0.5, -0.25);
  PotentialSpec pushed = unimodular_pushforward(spec, map);

  Eigen::VectorXd x = pt2(0.2, 0.3);
  Eigen::MatrixXd A = map.matrix.cast<double>();
  // Hess_y s'(Ax+t) = A^{-t} Hess_x s(x) A^{-1}
  Eigen::MatrixXd Hx = potential_hessian(spec, x);
  Eigen::MatrixXd Hy = potential_hessian(pushed, map.apply(x));
  Eigen::MatrixXd expected = A.inverse().transpose() * Hx * A.inverse();
  CHECK((Hy - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("interior grids stay interior") {
  for (const char* name : {"interval", "square", "square2", "simplex"}) {
    Polytope P = Polytope::named(name);
    auto grid = interior_grid(P, 9);
    CHECK(!grid.empty());
    for (const auto& x : grid) CHECK(P.is_interior(x, 1e-12));
  }
}
