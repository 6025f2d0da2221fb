#include "toric/operator.hpp"

#include <cmath>

namespace toric {

namespace {

bool same_polytope(const Polytope& a, const Polytope& b) {
  if (a.dim() != b.dim() || a.facets().size() != b.facets().size()) return false;
  for (size_t k = 0; k < a.facets().size(); ++k) {
    if (a.facets()[k].normal != b.facets()[k].normal) return false;
    if (std::abs(a.facets()[k].offset - b.facets()[k].offset) > 1e-12) return false;
  }
  return true;
}

}  // namespace

DiscreteOperatorPair assemble_forms(const PotentialSpec& spec,
                                    const BasisSpec& basis,
                                    int quadrature_nodes) {
  if (!same_polytope(spec.polytope, basis.polytope))
    throw BasisMismatch("basis and potential live on different polytopes");
  const int nb = basis.size();
  const int n = spec.polytope.dim();
  const int nq_axis =
      quadrature_nodes > 0 ? quadrature_nodes : 2 * basis.degree + 16;
  QuadratureRule rule = polytope_quadrature(spec.polytope, nq_axis);

  const Eigen::VectorXi& k = basis.k;
  const bool equivariant = !k.isZero();
  Eigen::VectorXd kd = k.cast<double>();

  DiscreteOperatorPair out;
  out.stiffness = Eigen::MatrixXd::Zero(nb, nb);
  out.mass = Eigen::MatrixXd::Zero(nb, nb);

  Eigen::VectorXd vals;
  Eigen::MatrixXd grads;
  for (int q = 0; q < rule.size(); ++q) {
    Eigen::VectorXd x = rule.points.row(q);
    double wq = rule.weights[q];
    HessianPair H = hessian_and_inverse(spec, x);
    eval_basis(basis, x, vals, grads);

    double potential_term = 0.0;
    if (equivariant) {
      // k^t Hess(s) k assembled facet by facet; the basis weight squared
      // cancels the 1/l blowup wherever k.nu != 0.
      Eigen::VectorXd ell = spec.polytope.facet_values(x);
      for (size_t l = 0; l < spec.polytope.facets().size(); ++l) {
        double knu = kd.dot(spec.polytope.facets()[l].normal.cast<double>());
        potential_term += spec.beta * knu * knu / ell[l];
      }
      potential_term += kd.dot(spec.correction.hessian_at(x) * kd);
    }

    Eigen::MatrixXd hg = grads * H.inverse;  // nb x n
    for (int i = 0; i < nb; ++i) {
      for (int j = i; j < nb; ++j) {
        double a = hg.row(i).dot(grads.row(j));
        if (equivariant) a += vals[i] * vals[j] * potential_term;
        double m = vals[i] * vals[j];
        if (!std::isfinite(a) || !std::isfinite(m))
          throw QuadratureBreakdown("non-finite integrand in assembly");
        out.stiffness(i, j) += wq * a;
        out.mass(i, j) += wq * m;
      }
    }
  }
  out.stiffness = out.stiffness.selfadjointView<Eigen::Upper>();
  out.mass = out.mass.selfadjointView<Eigen::Upper>();
  return out;
}

EigenSolution solve_first_eigen(const PotentialSpec& spec,
                                const Eigen::VectorXi& k,
                                const SolveOptions& opts) {
  BasisSpec basis = build_basis(spec.polytope, k, opts.degree);
  DiscreteOperatorPair forms = assemble_forms(spec, basis, opts.quadrature_nodes);
  const int nb = basis.size();

  // Reduce A u = lambda M u to a standard problem through the spectral
  // square root of M, dropping numerically dependent directions.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> mes(forms.mass);
  if (mes.info() != Eigen::Success) throw SolverFailure("mass eigensolve failed");
  double mmax = mes.eigenvalues().maxCoeff();
  if (mmax <= 0.0) throw NotPositiveDefiniteMass("mass matrix is not positive");
  const double trunc = 1e-13 * mmax;
  std::vector<int> keep;
  for (int i = 0; i < nb; ++i)
    if (mes.eigenvalues()[i] > trunc) keep.push_back(i);
  if (keep.empty()) throw NotPositiveDefiniteMass("mass matrix fully truncated");
  Eigen::MatrixXd B(nb, keep.size());
  for (size_t c = 0; c < keep.size(); ++c)
    B.col(c) = mes.eigenvectors().col(keep[c]) /
               std::sqrt(mes.eigenvalues()[keep[c]]);

  Eigen::MatrixXd At = B.transpose() * forms.stiffness * B;
  At = 0.5 * (At + At.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> aes(At);
  if (aes.info() != Eigen::Success) throw SolverFailure("eigensolve failed");

  EigenSolution sol;
  sol.eigenvalues = aes.eigenvalues();
  sol.all_vectors = B * aes.eigenvectors();
  sol.basis = basis;
  sol.forms = forms;
  sol.cluster_tol = opts.cluster_tol;

  // Deterministic sign: largest-coefficient entry positive.
  for (int c = 0; c < sol.all_vectors.cols(); ++c) {
    int idx = 0;
    sol.all_vectors.col(c).cwiseAbs().maxCoeff(&idx);
    if (sol.all_vectors(idx, c) < 0.0) sol.all_vectors.col(c) *= -1.0;
  }

  double scale = sol.eigenvalues.cwiseAbs().maxCoeff();
  double zero_tol = 1e-9 * std::max(scale, 1.0);
  int first = -1;
  for (int i = 0; i < sol.eigenvalues.size(); ++i) {
    if (sol.eigenvalues[i] > zero_tol) {
      first = i;
      break;
    }
  }
  if (first < 0) throw NoPositiveEigenvalue("no eigenvalue above zero tolerance");
  sol.lambda1 = sol.eigenvalues[first];
  sol.lambda1_index = first;

  std::vector<int> cluster;
  for (int i = first; i < sol.eigenvalues.size(); ++i) {
    if (sol.eigenvalues[i] - sol.lambda1 <= opts.cluster_tol * sol.lambda1)
      cluster.push_back(i);
    else
      break;
  }
  sol.vectors.resize(nb, cluster.size());
  sol.residuals.resize(cluster.size());
  for (size_t c = 0; c < cluster.size(); ++c) {
    Eigen::VectorXd u = sol.all_vectors.col(cluster[c]);
    sol.vectors.col(c) = u;
    Eigen::VectorXd mu = forms.mass * u;
    sol.residuals[c] = (forms.stiffness * u - sol.lambda1 * mu).norm() / mu.norm();
  }
  return sol;
}

double rayleigh_quotient(const DiscreteOperatorPair& forms,
                         const BasisSpec& basis, Eigen::VectorXd f) {
  if (f.size() != basis.size())
    throw BasisMismatch("coefficient vector length does not match basis");
  if (f.norm() == 0.0) throw ZeroVector("zero coefficient vector");
  if (basis.k.isZero()) {
    // Deflate the constant mode (basis element 0 is the constant).
    Eigen::VectorXd c = Eigen::VectorXd::Zero(f.size());
    c[0] = 1.0;
    double proj = c.dot(forms.mass * f) / c.dot(forms.mass * c);
    f -= proj * c;
    if (f.norm() == 0.0) throw ZeroVector("vector is the constant mode");
  }
  return f.dot(forms.stiffness * f) / f.dot(forms.mass * f);
}

Eigenfunction EigenSolution::eigenfunction(int a) const {
  Eigenfunction f;
  f.basis = basis;
  f.coefficients = vectors.col(a);
  return f;
}

Eigenfunction EigenSolution::mode(int i) const {
  Eigenfunction f;
  f.basis = basis;
  f.coefficients = all_vectors.col(i);
  return f;
}

}  // namespace toric
