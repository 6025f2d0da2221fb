#ifndef TORIC_OPERATOR_HPP
#define TORIC_OPERATOR_HPP

#include "toric/basis.hpp"
#include "toric/potential.hpp"
#include "toric/quadrature.hpp"

namespace toric {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct QuadratureBreakdown : SolverError {
  using SolverError::SolverError;
};
struct NotPositiveDefiniteMass : SolverError {
  using SolverError::SolverError;
};
struct SolverFailure : SolverError {
  using SolverError::SolverError;
};
struct NoPositiveEigenvalue : SolverError {
  using SolverError::SolverError;
};
struct ZeroVector : SolverError {
  using SolverError::SolverError;
};
struct BasisMismatch : SolverError {
  using SolverError::SolverError;
};

/// Weak form of the reduced Laplacian at weight k:
///   stiffness A_ij = int ( grad phi_i^t H^{-1} grad phi_j
///                          + phi_i phi_j k^t H k ) dx,
///   mass      M_ij = int phi_i phi_j dx,  H = Hess s.
struct DiscreteOperatorPair {
  Eigen::MatrixXd stiffness;
  Eigen::MatrixXd mass;
};

struct SolveOptions {
  int degree = 12;
  int quadrature_nodes = 0;  // 0 -> 2*degree + 16 per axis
  double cluster_tol = 1e-6;
};

DiscreteOperatorPair assemble_forms(const PotentialSpec& spec,
                                    const BasisSpec& basis,
                                    int quadrature_nodes = 0);

/// First eigenvalue, its numerically clustered eigenspace, and the full
/// discrete spectrum (after mass-matrix truncation).
struct EigenSolution {
  double lambda1 = 0.0;
  Eigen::MatrixXd vectors;    // columns: M-orthonormal cluster basis
  Eigen::VectorXd residuals;  // ||A u - lambda1 M u|| / ||M u|| per vector
  double cluster_tol = 1e-6;
  int lambda1_index = 0;  // position of lambda1 in eigenvalues

  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd all_vectors;  // M-orthonormal columns

  BasisSpec basis;
  DiscreteOperatorPair forms;

  int cluster_dimension() const { return static_cast<int>(vectors.cols()); }
  Eigenfunction eigenfunction(int a) const;  // a-th cluster member
  Eigenfunction mode(int i) const;           // i-th overall discrete mode
};

EigenSolution solve_first_eigen(const PotentialSpec& spec,
                                const Eigen::VectorXi& k,
                                const SolveOptions& opts = {});

/// (f^t A f)/(f^t M f); for k = 0 the coefficient vector is first made
/// M-orthogonal to the constant mode.
double rayleigh_quotient(const DiscreteOperatorPair& forms,
                         const BasisSpec& basis, Eigen::VectorXd f);

}  // namespace toric

#endif
