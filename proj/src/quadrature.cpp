#include "toric/quadrature.hpp"

#include <cmath>

namespace toric {

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  // Golub-Welsch: eigen-decomposition of the Jacobi matrix.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = b;
    J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes = es.eigenvalues();
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double v = es.eigenvectors()(0, i);
    weights[i] = 2.0 * v * v;
  }
}

QuadratureRule polytope_quadrature(const Polytope& P, int nodes_per_axis) {
  const int n = P.dim();
  Eigen::VectorXd gx, gw;
  gauss_legendre(nodes_per_axis, gx, gw);
  QuadratureRule rule;

  switch (P.shape()) {
    case PolytopeShape::Interval: {
      auto [lo, hi] = P.box_bounds();
      double a = lo[0], b = hi[0];
      rule.points.resize(nodes_per_axis, 1);
      rule.weights.resize(nodes_per_axis);
      for (int i = 0; i < nodes_per_axis; ++i) {
        rule.points(i, 0) = 0.5 * (a + b) + 0.5 * (b - a) * gx[i];
        rule.weights[i] = 0.5 * (b - a) * gw[i];
      }
      return rule;
    }
    case PolytopeShape::Box: {
      auto [lo, hi] = P.box_bounds();
      const int nq = nodes_per_axis * nodes_per_axis;
      rule.points.resize(nq, 2);
      rule.weights.resize(nq);
      int q = 0;
      for (int i = 0; i < nodes_per_axis; ++i) {
        for (int j = 0; j < nodes_per_axis; ++j, ++q) {
          rule.points(q, 0) = 0.5 * (lo[0] + hi[0]) + 0.5 * (hi[0] - lo[0]) * gx[i];
          rule.points(q, 1) = 0.5 * (lo[1] + hi[1]) + 0.5 * (hi[1] - lo[1]) * gx[j];
          rule.weights[q] =
              0.25 * (hi[0] - lo[0]) * (hi[1] - lo[1]) * gw[i] * gw[j];
        }
      }
      return rule;
    }
    case PolytopeShape::Triangle: {
      // Duffy map from the unit square: x = v0 + u(1-v) e1 + u v e2 with
      // Jacobian u |det(e1, e2)|.
      const auto& vs = P.vertices();
      Eigen::VectorXd v0 = vs[0].point;
      Eigen::VectorXd e1 = vs[1].point - v0, e2 = vs[2].point - v0;
      double jac = std::abs(e1[0] * e2[1] - e1[1] * e2[0]);
      const int nq = nodes_per_axis * nodes_per_axis;
      rule.points.resize(nq, 2);
      rule.weights.resize(nq);
      int q = 0;
      for (int i = 0; i < nodes_per_axis; ++i) {
        double u = 0.5 * (gx[i] + 1.0), wu = 0.5 * gw[i];
        for (int j = 0; j < nodes_per_axis; ++j, ++q) {
          double v = 0.5 * (gx[j] + 1.0), wv = 0.5 * gw[j];
          Eigen::VectorXd x = v0 + u * (1.0 - v) * e1 + u * v * e2;
          rule.points.row(q) = x;
          rule.weights[q] = wu * wv * u * jac;
        }
      }
      return rule;
    }
    default:
      throw UnsupportedPolytope("no quadrature rule for this polytope shape");
  }
  (void)n;
}

}  // namespace toric
