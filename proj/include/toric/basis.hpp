#ifndef TORIC_BASIS_HPP
#define TORIC_BASIS_HPP

#include "toric/polynomial.hpp"
#include "toric/polytope.hpp"
#include "toric/quadrature.hpp"

namespace toric {

/// Rayleigh-Ritz trial space for torus weight k. Each basis element is
/// w(x) p_i(x) with p_i polynomial and w = prod_l l_l^{gamma_l}; for k = 0
/// the weight is 1 and the constant is element 0 (deflated at solve time).
struct BasisSpec {
  Polytope polytope;
  Eigen::VectorXi k;
  int degree = 0;
  std::vector<double> gamma;        // per-facet boundary exponents
  std::vector<Polynomial> polys;    // polynomial parts

  int size() const { return static_cast<int>(polys.size()); }
  bool weighted() const;
};

/// Boundary weight w(x) and its logarithmic gradient g = sum gamma nu / l,
/// so that grad w = w g.
struct WeightEval {
  double w = 1.0;
  Eigen::VectorXd log_grad;
  Eigen::MatrixXd log_grad_jacobian;  // d(log_grad), for Hessians
};

WeightEval eval_weight(const BasisSpec& basis, const Eigen::VectorXd& x);

/// Values and gradients of all basis elements at an interior point.
void eval_basis(const BasisSpec& basis, const Eigen::VectorXd& x,
                Eigen::VectorXd& values, Eigen::MatrixXd& gradients);

/// For boxes: tensor Legendre products of total degree <= D. For
/// triangles: monomials in centroid-shifted coordinates. Throws
/// UnsupportedPolytope otherwise.
BasisSpec build_basis(const Polytope& P, const Eigen::VectorXi& k, int degree);

/// A function in the trial space, reconstructed from coefficients.
struct Eigenfunction {
  BasisSpec basis;
  Eigen::VectorXd coefficients;

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;
};

}  // namespace toric

#endif
