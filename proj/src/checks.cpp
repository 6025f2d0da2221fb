#include "toric/checks.hpp"

#include <cmath>

namespace toric {

double legendre_oracle(int k, int index) {
  if (index < std::max(std::abs(k), 1))
    throw IndexBelowWeight("Legendre index below max(|k|, 1)");
  return static_cast<double>(index) * (index + 1);
}

namespace {

// s'', s''' for a 1-D spec: beta * sum nu^2/l (resp. -beta * sum nu^3/l^2)
// plus the polynomial correction derivatives.
void interval_potential_derivs(const PotentialSpec& spec, double x,
                               double& s2, double& s3) {
  Eigen::VectorXd pt(1);
  pt[0] = x;
  Eigen::VectorXd ell = spec.polytope.facet_values(pt);
  if (ell.minCoeff() < kInteriorTol)
    throw GridOutsideInterior("flux identity sampled outside the interior");
  s2 = 0.0;
  s3 = 0.0;
  for (size_t l = 0; l < spec.polytope.facets().size(); ++l) {
    double nu = spec.polytope.facets()[l].normal[0];
    s2 += spec.beta * nu * nu / ell[l];
    s3 -= spec.beta * nu * nu * nu / (ell[l] * ell[l]);
  }
  s2 += spec.correction.hessian_at(pt)(0, 0);
  s3 += spec.correction.derivative(0).derivative(0).derivative(0)(pt);
}

}  // namespace

double sphere_flux_identity_residual(const PotentialSpec& spec,
                                     const Eigenfunction& f, double lambda,
                                     int k,
                                     const std::vector<Eigen::VectorXd>& grid) {
  if (spec.polytope.dim() != 1)
    throw DomainMismatch("flux identity is one-dimensional");
  double worst = 0.0;
  double scale = 0.0;
  for (const auto& x : grid) {
    double s2, s3;
    interval_potential_derivs(spec, x[0], s2, s3);
    double fv = f.value(x);
    double f1 = f.gradient(x)[0];
    double f2 = f.hessian(x)(0, 0);
    // d/dx [ (f'/s'')^2 - k^2 f^2 ]
    double lhs = 2.0 * (f1 / s2) * (f2 * s2 - f1 * s3) / (s2 * s2) -
                 2.0 * k * k * fv * f1;
    double rhs = 2.0 * lambda * fv * f1 / s2;
    worst = std::max(worst, std::abs(lhs + rhs));
    scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
  }
  return worst / std::max(scale, 1.0);
}

double expansion_identity_residual(const PotentialSpec& spec,
                                   const Eigenfunction& f, double lambda,
                                   const std::vector<Eigen::VectorXd>& grid) {
  const int n = spec.polytope.dim();
  Eigen::VectorXd lhs = -q_field(spec, f, lambda, grid);
  double worst = 0.0;
  double scale = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd& x = grid[i];
    HessianPair H = hessian_and_inverse(spec, x);
    double fv = f.value(x);
    Eigen::VectorXd g = f.gradient(x);
    Eigen::MatrixXd hf = f.hessian(x);
    Eigen::VectorXd V = H.inverse * g;
    // Jacobian of V = H^{-1} grad f, column by column.
    Eigen::MatrixXd DV(n, n);
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXd dH = potential_hessian_derivative(spec, x, j);
      DV.col(j) = H.inverse * (hf.col(j) - dH * V);
    }
    double rhs = lambda * lambda * fv * fv - 2.0 * lambda * g.dot(V) +
                 (DV * DV).trace();
    worst = std::max(worst, std::abs(lhs[i] - rhs));
    scale = std::max({scale, std::abs(lhs[i]), std::abs(rhs)});
  }
  return worst / std::max(scale, 1.0);
}

VertexExpansionResult vertex_expansion_check(const PotentialSpec& spec,
                                             const std::vector<double>& radii,
                                             const Eigen::VectorXd& u) {
  const Polytope& P = spec.polytope;
  const int n = P.dim();
  // The spec must be standard at the origin: every coordinate facet x_i >= 0.
  for (int i = 0; i < n; ++i) {
    bool found = false;
    for (const auto& facet : P.facets()) {
      bool is_ei = true;
      for (int j = 0; j < n; ++j)
        if (facet.normal[j] != (j == i ? 1 : 0)) is_ei = false;
      if (is_ei && std::abs(facet.offset) < 1e-12) found = true;
    }
    if (!found)
      throw VertexNotStandard("spec is not standardized at the origin");
  }
  if (u.minCoeff() <= 0.0)
    throw VertexNotStandard("ray direction must be strictly positive");

  VertexExpansionResult out;
  std::vector<double> logs_t, logs_d;
  for (double t : radii) {
    Eigen::VectorXd x = t * u;
    HessianPair H = hessian_and_inverse(spec, x);
    Eigen::MatrixXd dev = spec.beta * H.inverse;
    for (int i = 0; i < n; ++i) dev(i, i) -= x[i];
    double d = dev.cwiseAbs().maxCoeff();
    out.max_deviation = std::max(out.max_deviation, d);
    if (d > 1e-300) {
      logs_t.push_back(std::log(t));
      logs_d.push_back(std::log(d));
    }
  }
  if (logs_t.size() < 2) {
    out.exponent = std::numeric_limits<double>::infinity();
    return out;
  }
  double mt = 0.0, md = 0.0;
  for (size_t i = 0; i < logs_t.size(); ++i) {
    mt += logs_t[i];
    md += logs_d[i];
  }
  mt /= logs_t.size();
  md /= logs_t.size();
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < logs_t.size(); ++i) {
    num += (logs_t[i] - mt) * (logs_d[i] - md);
    den += (logs_t[i] - mt) * (logs_t[i] - mt);
  }
  out.exponent = num / den;
  return out;
}

SymbolResult ellipticity_symbol(const PotentialSpec& spec,
                                const std::vector<Eigenfunction>& fields,
                                const Eigen::VectorXd& x,
                                const Eigen::VectorXd& xi) {
  if (xi.norm() == 0.0) throw ZeroCovector("zero symbol covector");
  const int N1 = static_cast<int>(fields.size());  // N + 1 fields
  const int size = N1 + 1;
  HessianPair H = hessian_and_inverse(spec, x);
  double q = xi.dot(H.inverse * xi);
  Eigen::VectorXd c(N1);  // c_a = xi^t H^{-1} grad f_a
  for (int a = 0; a < N1; ++a) c[a] = xi.dot(H.inverse * fields[a].gradient(x));

  SymbolResult out;
  out.matrix = Eigen::MatrixXd::Zero(size, size);
  for (int a = 0; a < N1; ++a) {
    out.matrix(a, a) = q;
    out.matrix(a, N1) = -q * c[a];
    out.matrix(N1, a) = 2.0 * q * c[a];
  }
  out.matrix(N1, N1) = -2.0 * q * c.squaredNorm();
  out.determinant = out.matrix.determinant();

  out.det_scale = 1.0;
  for (int r = 0; r < size; ++r)
    out.det_scale *= std::max(out.matrix.row(r).norm(), 1e-300);

  Eigen::VectorXd predicted = Eigen::VectorXd::Zero(size);
  for (int a = 0; a < N1; ++a) predicted += 2.0 * c[a] * out.matrix.row(a);
  out.combo_residual = (out.matrix.row(size - 1).transpose() - predicted).norm();
  out.combo_scale = std::max(predicted.norm(), 1e-300);
  return out;
}

}  // namespace toric
