#ifndef TORIC_POTENTIAL_HPP
#define TORIC_POTENTIAL_HPP

#include <optional>
#include <string>

#include "toric/polynomial.hpp"
#include "toric/polytope.hpp"

namespace toric {

struct PotentialError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BoundaryPoint : PotentialError {
  using PotentialError::PotentialError;
};
struct NotPositiveDefinite : PotentialError {
  using PotentialError::PotentialError;
};
struct DomainMismatch : PotentialError {
  using PotentialError::PotentialError;
};

/// Minimum facet value below which a point counts as boundary for
/// evaluation purposes.
constexpr double kInteriorTol = 1e-10;

/// Symplectic potential s = beta * sum_k (l_k log l_k - l_k) + v with a
/// polynomial correction v. beta = 1/2 matches the smooth round metric
/// convention; beta = 1 matches the bare l log l normalization.
struct PotentialSpec {
  Polytope polytope;
  double beta = 0.5;
  Polynomial correction;  // v; zero polynomial for the Guillemin potential

  static PotentialSpec guillemin(Polytope P, double beta = 0.5);
};

/// Perturbation direction delta_s. When boundary_flat, the polynomial has
/// been multiplied by (prod_k l_k)^2 so that delta_s and its gradient
/// vanish on every facet.
struct Direction {
  std::string id;
  Polynomial delta_s;
  bool boundary_flat = false;
};

/// beta * sum_l nu_l nu_l^t / l_l(x); throws BoundaryPoint when some
/// facet value drops below the interior tolerance.
Eigen::MatrixXd guillemin_hessian(const Polytope& P, double beta,
                                  const Eigen::VectorXd& x);

/// Hess s(x) = guillemin part + Hess v(x).
Eigen::MatrixXd potential_hessian(const PotentialSpec& spec,
                                  const Eigen::VectorXd& x);

struct HessianPair {
  Eigen::MatrixXd hess;
  Eigen::MatrixXd inverse;
};

/// Hessian and its inverse by direct factorization; throws
/// NotPositiveDefinite when the spec fails convexity at x.
HessianPair hessian_and_inverse(const PotentialSpec& spec,
                                const Eigen::VectorXd& x);

/// d/dx_m of Hess s at x (analytic; used by the identity checks).
Eigen::MatrixXd potential_hessian_derivative(const PotentialSpec& spec,
                                             const Eigen::VectorXd& x, int m);

struct SpotValidation {
  bool pass = true;
  std::string failure_reason;
  std::optional<Eigen::VectorXd> failing_point;
};

struct SpotGridOptions {
  int interior_points_per_axis = 33;
  int facet_samples = 65;
};

/// Positive definiteness of Hess s on an interior grid and of the
/// tangential Hessian at facet sample points. Failures are reported, not
/// thrown.
SpotValidation validate_spot(const PotentialSpec& spec,
                             const SpotGridOptions& opts = {});

/// delta_s = (prod_k l_k)^2 * poly, flat to first order on the boundary.
Direction boundary_flat_direction(const Polytope& P, const Polynomial& poly,
                                  std::string id = "");

/// Transport of the potential under an affine unimodular map: same beta,
/// correction composed with the inverse map, Guillemin part rebuilt from
/// the image facets.
PotentialSpec unimodular_pushforward(const PotentialSpec& spec,
                                     const UnimodularMap& map);

/// Uniform strictly-interior sample grid (boxes: tensor grid; triangles:
/// barycentric grid). Shared by validation, hull grids and check scans.
std::vector<Eigen::VectorXd> interior_grid(const Polytope& P, int per_axis);

}  // namespace toric

#endif
