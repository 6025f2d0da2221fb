#ifndef TORIC_VARIATION_HPP
#define TORIC_VARIATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "toric/operator.hpp"

namespace toric {

struct VariationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DirectionNotBoundaryFlat : VariationError {
  using VariationError::VariationError;
};
struct PerturbedSpecInvalid : VariationError {
  using VariationError::VariationError;
};
struct GridOutsideInterior : VariationError {
  using VariationError::VariationError;
};
struct EmptyDictionary : VariationError {
  using VariationError::VariationError;
};
struct Stalled : VariationError {
  using VariationError::VariationError;
};

/// First variation of lambda_1^k as a quadratic form over the clustered
/// first eigenspace (pre-integration-by-parts form):
///   G_ab = int ( -grad f_a^t H^{-1} Hess(ds) H^{-1} grad f_b
///                + f_a f_b k^t Hess(ds) k ) dx.
Eigen::MatrixXd derivative_quadform(const PotentialSpec& spec,
                                    const EigenSolution& E,
                                    const Direction& direction,
                                    int quadrature_nodes = 0);

/// Post-integration-by-parts form, valid for boundary-flat directions:
///   G'_ab = int Q(f_a, f_b) ds dx
/// with Q the polarized defect field. The second divergence in Q is taken
/// by central differences; everything else is analytic.
Eigen::MatrixXd derivative_post_ibp(const PotentialSpec& spec,
                                    const EigenSolution& E,
                                    const Direction& direction,
                                    int quadrature_nodes = 0);

/// Defect field Q_s(f) = -d2_ij( s^il f_l s^jr f_r ) + k^t Hess|f|^2 k
/// sampled on interior grid points.
Eigen::VectorXd q_field(const PotentialSpec& spec, const Eigenfunction& f,
                        double lambda, const std::vector<Eigen::VectorXd>& grid);

/// Polarized defect Q(f_a, f_b) at a single interior point.
double q_polarized_at(const PotentialSpec& spec, const Eigenfunction& fa,
                      const Eigenfunction& fb, const Eigen::VectorXd& x);

/// Central-difference branch-derivative oracle:
/// (lambda_1^k(s + t ds) - lambda_1^k(s - t ds)) / (2t).
double fd_lambda(const PotentialSpec& spec, const Eigen::VectorXi& k,
                 const Polynomial& delta_s, double t, const SolveOptions& opts);

/// d_minus = max, d_plus = min of the spectrum of G over E_1^k; they
/// bracket the one-sided derivatives of the nonsmooth eigenvalue.
std::pair<double, double> one_sided_derivatives(const PotentialSpec& spec,
                                                const Eigen::VectorXi& k,
                                                const Direction& direction,
                                                const SolveOptions& opts = {});

struct CriticalityRecord {
  std::string direction_id;
  double d_minus = 0.0;
  double d_plus = 0.0;
  bool witness = false;        // strict one-sided violation of criticality
  bool boundary_case = false;  // a one-sided derivative within tolerance of 0
};

struct CriticalityReport {
  std::vector<CriticalityRecord> records;
  std::string verdict;  // "not-critical" | "critical-candidate" | "unresolved"
  std::string witness_id;
  bool has_boundary_cases = false;
};

/// Scans a direction dictionary; "not-critical" is certified by a witness
/// direction with a one-sided derivative of the wrong sign,
/// "critical-candidate" requires d_minus > 0 > d_plus strictly for every
/// direction, anything else stays "unresolved".
CriticalityReport criticality_scan(const PotentialSpec& spec,
                                   const Eigen::VectorXi& k,
                                   const std::vector<Direction>& directions,
                                   const SolveOptions& opts = {},
                                   double tolerance = 1e-8);

struct HullReport {
  double residual = 0.0;
  Eigen::MatrixXd gram_weights;  // PSD, trace 1, over E_1^k
  bool feasible = false;
  double field_scale = 1.0;
};

struct HullOptions {
  int grid_per_axis = 33;
  int restarts = 8;
  std::uint64_t seed = 1234;
  double feasibility_tol = 1e-6;
};

/// Feasibility of sum_a alpha_a Q_s(f_a) = 0 over convex weights, relaxed
/// to PSD trace-1 Gram matrices W through the quadratic dependence of Q on
/// f: minimizes || sum_bc W_bc Q(e_b, e_c) ||_{L2} by projected gradient.
HullReport hull_feasibility(const PotentialSpec& spec, const Eigen::VectorXi& k,
                            const SolveOptions& solve_opts = {},
                            const HullOptions& hull_opts = {});

/// Solver core shared with the synthetic fixtures: qpol[b][c] are the
/// polarized fields on a grid with L2 weights.
HullReport minimize_hull_residual(
    const std::vector<std::vector<Eigen::VectorXd>>& qpol,
    const Eigen::VectorXd& grid_weights, int restarts, std::uint64_t seed,
    double feasibility_tol = 1e-6);

enum class FlowMode { Ascend, Descend };

struct FlowStep {
  Polynomial correction;  // potential correction after the step
  double lambda1 = 0.0;
  std::string direction_id;
  double step_size = 0.0;
  double rate = 0.0;  // d_plus (ascend) or d_minus (descend) of the step
};

struct FlowTrace {
  std::vector<FlowStep> steps;  // steps[0] is the initial record
  PotentialSpec final_spec;
};

struct FlowOptions {
  int steps = 50;
  double step_size = 0.1;
  FlowMode mode = FlowMode::Ascend;
  double stall_tol = 1e-8;
};

/// Greedy nonsmooth flow: each step takes the dictionary direction with the
/// best guaranteed one-sided rate over the whole eigencluster and
/// backtracks the step length until the potential stays in Spot and the
/// eigenvalue moves the right way. Throws Stalled when no direction moves.
FlowTrace ascent_flow(const PotentialSpec& spec0, const Eigen::VectorXi& k,
                      const std::vector<Direction>& dictionary,
                      const SolveOptions& solve_opts = {},
                      const FlowOptions& flow_opts = {});

/// Monomial dictionary: raw monomials of total degree 1..max_degree plus
/// boundary-flat monomials of total degree <= bflat_degree; optionally with
/// negated copies (flows only step in the +direction).
std::vector<Direction> default_direction_dictionary(const Polytope& P,
                                                    int max_degree = 4,
                                                    int bflat_degree = 2,
                                                    bool include_negations = false);

}  // namespace toric

#endif
