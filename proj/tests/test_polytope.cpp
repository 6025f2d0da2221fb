#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "toric/polytope.hpp"

using namespace toric;

namespace {
Facet facet(std::initializer_list<int> normal, double offset) {
  Facet f;
  f.normal.resize(normal.size());
  int i = 0;
  for (int v : normal) f.normal[i++] = v;
  f.offset = offset;
  return f;
}
}  // namespace

TEST_CASE("named polytopes") {
  Polytope interval = Polytope::named("interval");
  CHECK(interval.dim() == 1);
  CHECK(interval.vertices().size() == 2);
  CHECK(interval.shape() == PolytopeShape::Interval);

  Polytope square = Polytope::named("square");
  CHECK(square.vertices().size() == 4);
  CHECK(square.shape() == PolytopeShape::Box);

  Polytope simplex = Polytope::named("simplex");
  CHECK(simplex.vertices().size() == 3);
  CHECK(simplex.shape() == PolytopeShape::Triangle);

  Polytope square2 = Polytope::named("square2");
  auto [lo, hi] = square2.box_bounds();
  CHECK(lo[0] == doctest::Approx(-1.0));
  CHECK(hi[1] == doctest::Approx(1.0));

  CHECK_THROWS_AS(Polytope::named("dodecahedron"), PolytopeError);
}

TEST_CASE("facet values and interiority") {
  Polytope P = Polytope::named("interval");  // l = x+1 and 1-x
  Eigen::VectorXd x(1);
  x << 0.25;
  Eigen::VectorXd ell = P.facet_values(x);
  CHECK(ell.minCoeff() == doctest::Approx(0.75));
  CHECK(P.is_interior(x));
  x << 1.0;
  CHECK(!P.is_interior(x));
  CHECK(P.diameter() == doctest::Approx(2.0));
}

TEST_CASE("build rejects bad facet data") {
  // normal (2, 0) is not primitive
  CHECK_THROWS_AS(Polytope::build({facet({2, 0}, 0), facet({-1, 0}, -1),
                                   facet({0, 1}, 0), facet({0, -1}, -1)}),
                  NonPrimitiveNormal);
  // half-space only: unbounded
  CHECK_THROWS_AS(Polytope::build({facet({1, 0}, 0), facet({0, 1}, 0)}),
                  Unbounded);
  // x + y <= 1, x >= 0, y >= 0 with a corner cut by x + 2y <= 2 has a
  // non-Delzant vertex where (1,1) and (1,2) meet... use the classic
  // non-smooth cone (1,0), (1,2) instead
  CHECK_THROWS_AS(Polytope::build({facet({1, 0}, 0), facet({-1, -2}, -2),
                                   facet({0, 1}, 0), facet({0, -1}, -3)}),
                  NonDelzantVertex);
  // empty: x >= 1 and x <= 0
  CHECK_THROWS_AS(Polytope::build({facet({1}, 1), facet({-1}, 0)}),
                  EmptyInterior);
}

TEST_CASE("unimodular maps transport polytopes") {
  Polytope simplex = Polytope::named("simplex");
  UnimodularMap map;
  map.matrix.resize(2, 2);
  map.matrix << 1, 1, 0, 1;
  map.translation = Eigen::VectorXd::Zero(2);

  Polytope image = map_polytope(simplex, map);
  CHECK(image.vertices().size() == 3);
  // vertices map forward
  for (const auto& v : simplex.vertices()) {
    Eigen::VectorXd y = map.apply(v.point);
    bool found = false;
    for (const auto& w : image.vertices())
      if ((w.point - y).norm() < 1e-12) found = true;
    CHECK(found);
  }
  // facet values are preserved: l'(Ax+t) = l(x)
  Eigen::VectorXd x(2);
  x << 0.2, 0.3;
  Eigen::VectorXd before = simplex.facet_values(x);
  Eigen::VectorXd after = image.facet_values(map.apply(x));
  CHECK(before.size() == after.size());
  std::sort(before.data(), before.data() + before.size());
  std::sort(after.data(), after.data() + after.size());
  CHECK((before - after).cwiseAbs().maxCoeff() < 1e-12);

  UnimodularMap inv = map.inverse();
  CHECK((inv.apply(map.apply(x)) - x).norm() < 1e-14);
}

TEST_CASE("standardize_at_vertex") {
  Polytope P = Polytope::named("square2");
  for (int v = 0; v < 4; ++v) {
    auto [Q, map] = standardize_at_vertex(P, v);
    // the chosen vertex lands at 0 and its facets become x_i >= 0
    Eigen::VectorXd zero = map.apply(P.vertices()[v].point);
    CHECK(zero.norm() < 1e-12);
    int coordinate_facets = 0;
    for (const auto& f : Q.facets()) {
      if (std::abs(f.offset) < 1e-12 &&
          ((f.normal[0] == 1 && f.normal[1] == 0) ||
           (f.normal[0] == 0 && f.normal[1] == 1)))
        ++coordinate_facets;
    }
    CHECK(coordinate_facets == 2);
  }
  CHECK_THROWS_AS(standardize_at_vertex(P, 7), InvalidVertex);
}
