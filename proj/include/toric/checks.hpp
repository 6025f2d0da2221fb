#ifndef TORIC_CHECKS_HPP
#define TORIC_CHECKS_HPP

#include "toric/variation.hpp"

namespace toric {

struct CheckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IndexBelowWeight : CheckError {
  using CheckError::CheckError;
};
struct ZeroCovector : CheckError {
  using CheckError::CheckError;
};
struct VertexNotStandard : CheckError {
  using CheckError::CheckError;
};

/// Eigenvalue l(l+1) of the associated Legendre operator
/// -((1-x^2) f')' + k^2 f / (1-x^2); requires l >= max(|k|, 1).
double legendre_oracle(int k, int index);

/// Max over the grid of |d/dx[(f'/s'')^2 - k^2 f^2] + 2 lambda f f'/s''|,
/// relative to the field scale. Holds exactly for any eigenfunction of the
/// 1-D reduced operator.
double sphere_flux_identity_residual(const PotentialSpec& spec,
                                     const Eigenfunction& f, double lambda,
                                     int k,
                                     const std::vector<Eigen::VectorXd>& grid);

/// Max relative deviation of
///   d2_ij( s^il f_l s^jr f_r ) = lambda^2 f^2 - 2 lambda df^t H^{-1} df
///                                + Tr( (D(H^{-1} df))^2 )
/// over the grid, for an invariant eigenfunction f. The left side is the
/// finite-difference second divergence; the right side is analytic.
double expansion_identity_residual(const PotentialSpec& spec,
                                   const Eigenfunction& f, double lambda,
                                   const std::vector<Eigen::VectorXd>& grid);

struct VertexExpansionResult {
  double exponent = 0.0;       // least-squares slope of log(dev) vs log(t)
  double max_deviation = 0.0;  // worst entry deviation over the radii
};

/// For a spec standardized at a vertex (facet values x_1..x_n near 0),
/// samples || beta * (Hess s)^{-1}(t u) - Diag(t u) ||_max along the ray and
/// fits the decay exponent; second-order vanishing means exponent ~ 2.
VertexExpansionResult vertex_expansion_check(const PotentialSpec& spec,
                                             const std::vector<double>& radii,
                                             const Eigen::VectorXd& u);

/// Principal symbol of the criticality PDE system for fields f_0..f_N:
/// (N+2)x(N+2), block diag(q, ..., q) bordered by the transport column and
/// a last row that is a linear combination of the first N+1 rows.
struct SymbolResult {
  Eigen::MatrixXd matrix;
  double determinant = 0.0;
  double det_scale = 1.0;        // product of row norms
  double combo_residual = 0.0;   // || last row - sum_a 2 c_a row_a ||
  double combo_scale = 1.0;      // norm of the last row's predicted value
};

SymbolResult ellipticity_symbol(const PotentialSpec& spec,
                                const std::vector<Eigenfunction>& fields,
                                const Eigen::VectorXd& x,
                                const Eigen::VectorXd& xi);

}  // namespace toric

#endif
