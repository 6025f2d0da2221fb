#ifndef TORIC_QUADRATURE_HPP
#define TORIC_QUADRATURE_HPP

#include <Eigen/Dense>

#include "toric/polytope.hpp"

namespace toric {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedPolytope : QuadratureError {
  using QuadratureError::QuadratureError;
};

struct QuadratureRule {
  Eigen::MatrixXd points;   // nq x n, strictly interior
  Eigen::VectorXd weights;  // nq
  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre nodes and weights on [-1,1] (Golub-Welsch).
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Tensor rule over a box, or a collapsed-coordinate (Duffy) tensor rule
/// over a triangle, with the given node count per axis.
QuadratureRule polytope_quadrature(const Polytope& P, int nodes_per_axis);

}  // namespace toric

#endif
