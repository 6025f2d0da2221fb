#include "toric/basis.hpp"

#include <cmath>

#include "toric/potential.hpp"

namespace toric {

bool BasisSpec::weighted() const {
  for (double g : gamma)
    if (g > 0.0) return true;
  return false;
}

WeightEval eval_weight(const BasisSpec& basis, const Eigen::VectorXd& x) {
  const Polytope& P = basis.polytope;
  const int n = P.dim();
  WeightEval ev;
  ev.log_grad = Eigen::VectorXd::Zero(n);
  ev.log_grad_jacobian = Eigen::MatrixXd::Zero(n, n);
  if (!basis.weighted()) return ev;
  Eigen::VectorXd ell = P.facet_values(x);
  if (ell.minCoeff() < kInteriorTol)
    throw BoundaryPoint("weight evaluated too close to the boundary");
  for (size_t l = 0; l < P.facets().size(); ++l) {
    double g = basis.gamma[l];
    if (g == 0.0) continue;
    ev.w *= std::pow(ell[l], g);
    Eigen::VectorXd nu = P.facets()[l].normal.cast<double>();
    ev.log_grad += (g / ell[l]) * nu;
    ev.log_grad_jacobian -= (g / (ell[l] * ell[l])) * (nu * nu.transpose());
  }
  return ev;
}

void eval_basis(const BasisSpec& basis, const Eigen::VectorXd& x,
                Eigen::VectorXd& values, Eigen::MatrixXd& gradients) {
  const int nb = basis.size();
  const int n = basis.polytope.dim();
  values.resize(nb);
  gradients.resize(nb, n);
  WeightEval wv = eval_weight(basis, x);
  for (int i = 0; i < nb; ++i) {
    double p = basis.polys[i](x);
    Eigen::VectorXd gp = basis.polys[i].gradient_at(x);
    values[i] = wv.w * p;
    gradients.row(i) = wv.w * (gp + p * wv.log_grad);
  }
}

namespace {

// Legendre polynomial in variable i of an n-dimensional space, mapped from
// [a,b] to [-1,1].
Polynomial mapped_legendre(int n, int i, int degree, double a, double b) {
  Polynomial p1 = legendre_polynomial(degree);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1, n);
  A(0, i) = 2.0 / (b - a);
  Eigen::VectorXd c(1);
  c[0] = -(a + b) / (b - a);
  return p1.compose_affine(A, c);
}

}  // namespace

BasisSpec build_basis(const Polytope& P, const Eigen::VectorXi& k, int degree) {
  if (degree < 1) throw QuadratureError("basis degree must be >= 1");
  if (k.size() != P.dim())
    throw DimensionMismatch("weight vector length does not match dimension");
  BasisSpec basis;
  basis.polytope = P;
  basis.k = k;
  basis.degree = degree;
  basis.gamma.assign(P.facets().size(), 0.0);
  const bool invariant = k.isZero();
  if (!invariant) {
    for (size_t l = 0; l < P.facets().size(); ++l)
      basis.gamma[l] =
          0.5 * std::abs((double)k.dot(P.facets()[l].normal));
  }
  const int n = P.dim();
  switch (P.shape()) {
    case PolytopeShape::Interval: {
      auto [lo, hi] = P.box_bounds();
      for (int d = 0; d <= degree; ++d)
        basis.polys.push_back(mapped_legendre(1, 0, d, lo[0], hi[0]));
      break;
    }
    case PolytopeShape::Box: {
      auto [lo, hi] = P.box_bounds();
      for (int total = 0; total <= degree; ++total) {
        for (int d1 = total; d1 >= 0; --d1) {
          int d2 = total - d1;
          basis.polys.push_back(mapped_legendre(2, 0, d1, lo[0], hi[0]) *
                                mapped_legendre(2, 1, d2, lo[1], hi[1]));
        }
      }
      break;
    }
    case PolytopeShape::Triangle: {
      // Monomials in centered coordinates; mild conditioning, good enough
      // at the degrees used here (the solver truncates the mass matrix).
      Eigen::VectorXd c = P.centroid();
      double scale = P.diameter();
      for (int total = 0; total <= degree; ++total) {
        for (int d1 = total; d1 >= 0; --d1) {
          int d2 = total - d1;
          Polynomial p = Polynomial::constant(n, 1.0);
          Polynomial u = (Polynomial::variable(n, 0) +
                          Polynomial::constant(n, -c[0])) *
                         (1.0 / scale);
          Polynomial v = (Polynomial::variable(n, 1) +
                          Polynomial::constant(n, -c[1])) *
                         (1.0 / scale);
          for (int q = 0; q < d1; ++q) p = p * u;
          for (int q = 0; q < d2; ++q) p = p * v;
          basis.polys.push_back(p);
        }
      }
      break;
    }
    default:
      throw UnsupportedPolytope("no basis for this polytope shape");
  }
  return basis;
}

double Eigenfunction::value(const Eigen::VectorXd& x) const {
  WeightEval wv = eval_weight(basis, x);
  double s = 0.0;
  for (int i = 0; i < basis.size(); ++i) s += coefficients[i] * basis.polys[i](x);
  return wv.w * s;
}

Eigen::VectorXd Eigenfunction::gradient(const Eigen::VectorXd& x) const {
  WeightEval wv = eval_weight(basis, x);
  const int n = basis.polytope.dim();
  double p = 0.0;
  Eigen::VectorXd gp = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < basis.size(); ++i) {
    p += coefficients[i] * basis.polys[i](x);
    gp += coefficients[i] * basis.polys[i].gradient_at(x);
  }
  return wv.w * (gp + p * wv.log_grad);
}

Eigen::MatrixXd Eigenfunction::hessian(const Eigen::VectorXd& x) const {
  WeightEval wv = eval_weight(basis, x);
  const int n = basis.polytope.dim();
  double p = 0.0;
  Eigen::VectorXd gp = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd hp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < basis.size(); ++i) {
    p += coefficients[i] * basis.polys[i](x);
    gp += coefficients[i] * basis.polys[i].gradient_at(x);
    hp += coefficients[i] * basis.polys[i].hessian_at(x);
  }
  // d2(w p) with grad w = w g, Hess w = w (g g^t + dg).
  Eigen::MatrixXd hw =
      wv.log_grad * wv.log_grad.transpose() + wv.log_grad_jacobian;
  return wv.w * (hp + wv.log_grad * gp.transpose() + gp * wv.log_grad.transpose() +
                 p * hw);
}

}  // namespace toric
