#include "toric/potential.hpp"

#include <cmath>

namespace toric {

PotentialSpec PotentialSpec::guillemin(Polytope P, double beta) {
  PotentialSpec spec;
  spec.correction = Polynomial::constant(P.dim(), 0.0);
  spec.polytope = std::move(P);
  spec.beta = beta;
  return spec;
}

Eigen::MatrixXd guillemin_hessian(const Polytope& P, double beta,
                                  const Eigen::VectorXd& x) {
  Eigen::VectorXd ell = P.facet_values(x);
  if (ell.minCoeff() < kInteriorTol)
    throw BoundaryPoint("point is not interior to the polytope");
  const int n = P.dim();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (size_t k = 0; k < P.facets().size(); ++k) {
    Eigen::VectorXd nu = P.facets()[k].normal.cast<double>();
    H += (nu * nu.transpose()) / ell[k];
  }
  return beta * H;
}

Eigen::MatrixXd potential_hessian(const PotentialSpec& spec,
                                  const Eigen::VectorXd& x) {
  return guillemin_hessian(spec.polytope, spec.beta, x) +
         spec.correction.hessian_at(x);
}

HessianPair hessian_and_inverse(const PotentialSpec& spec,
                                const Eigen::VectorXd& x) {
  HessianPair pair;
  pair.hess = potential_hessian(spec, x);
  Eigen::LLT<Eigen::MatrixXd> llt(pair.hess);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("Hess s is not positive definite at the point");
  pair.inverse = llt.solve(Eigen::MatrixXd::Identity(x.size(), x.size()));
  return pair;
}

Eigen::MatrixXd potential_hessian_derivative(const PotentialSpec& spec,
                                             const Eigen::VectorXd& x, int m) {
  const Polytope& P = spec.polytope;
  Eigen::VectorXd ell = P.facet_values(x);
  if (ell.minCoeff() < kInteriorTol)
    throw BoundaryPoint("point is not interior to the polytope");
  const int n = P.dim();
  Eigen::MatrixXd dH = Eigen::MatrixXd::Zero(n, n);
  for (size_t k = 0; k < P.facets().size(); ++k) {
    Eigen::VectorXd nu = P.facets()[k].normal.cast<double>();
    dH -= (nu[m] / (ell[k] * ell[k])) * (nu * nu.transpose());
  }
  dH *= spec.beta;
  // Third derivatives of the polynomial correction.
  Polynomial vm = spec.correction.derivative(m);
  dH += vm.hessian_at(x);
  return dH;
}

namespace {

// Vertices incident to facet k (n = 2 gives exactly two for a valid
// polytope).
std::vector<Eigen::VectorXd> facet_endpoints(const Polytope& P, int k) {
  std::vector<Eigen::VectorXd> pts;
  for (const auto& v : P.vertices())
    for (int f : v.incident_facets)
      if (f == k) pts.push_back(v.point);
  return pts;
}

}  // namespace

SpotValidation validate_spot(const PotentialSpec& spec,
                             const SpotGridOptions& opts) {
  SpotValidation report;
  const Polytope& P = spec.polytope;
  const int n = P.dim();
  const double scale = 1.0 + spec.correction.hessian_at(P.centroid()).norm();
  const double pd_tol = 1e-10 * scale;

  for (const auto& x : interior_grid(P, opts.interior_points_per_axis)) {
    Eigen::MatrixXd H = potential_hessian(spec, x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.eigenvalues().minCoeff() <= pd_tol) {
      report.pass = false;
      report.failure_reason = "Hess s not positive definite on interior grid";
      report.failing_point = x;
      return report;
    }
  }

  if (n >= 2) {
    for (size_t k = 0; k < P.facets().size(); ++k) {
      auto ends = facet_endpoints(P, static_cast<int>(k));
      if (ends.size() != 2) continue;
      Eigen::VectorXi nu = P.facets()[k].normal;
      Eigen::VectorXd t(2);
      t << -nu[1], nu[0];  // exact lattice tangent, nu . t = 0
      for (int i = 1; i <= opts.facet_samples; ++i) {
        double u = static_cast<double>(i) / (opts.facet_samples + 1);
        Eigen::VectorXd p = (1.0 - u) * ends[0] + u * ends[1];
        Eigen::VectorXd ell = P.facet_values(p);
        double tangential = t.dot(spec.correction.hessian_at(p) * t);
        for (size_t l = 0; l < P.facets().size(); ++l) {
          if (l == k) continue;  // nu_k . t = 0 exactly; singular term drops
          double nt = P.facets()[l].normal.cast<double>().dot(t);
          tangential += spec.beta * nt * nt / ell[l];
        }
        if (tangential <= pd_tol) {
          report.pass = false;
          report.failure_reason = "tangential Hessian fails on a facet";
          report.failing_point = p;
          return report;
        }
      }
    }
  }
  return report;
}

Direction boundary_flat_direction(const Polytope& P, const Polynomial& poly,
                                  std::string id) {
  if (poly.dim() != P.dim())
    throw DomainMismatch("polynomial dimension does not match polytope");
  Polynomial prod = Polynomial::constant(P.dim(), 1.0);
  for (const auto& f : P.facets()) {
    Polynomial ell = Polynomial::constant(P.dim(), -f.offset);
    for (int i = 0; i < P.dim(); ++i)
      if (f.normal[i] != 0)
        ell += Polynomial::variable(P.dim(), i) * static_cast<double>(f.normal[i]);
    prod = prod * ell;
  }
  Direction dir;
  dir.delta_s = prod * prod * poly;
  dir.boundary_flat = true;
  dir.id = id.empty() ? "bflat(" + poly.to_string() + ")" : std::move(id);
  return dir;
}

PotentialSpec unimodular_pushforward(const PotentialSpec& spec,
                                     const UnimodularMap& map) {
  if (map.matrix.rows() != spec.polytope.dim())
    throw DomainMismatch("map dimension does not match the potential domain");
  PotentialSpec out;
  out.polytope = map_polytope(spec.polytope, map);
  out.beta = spec.beta;
  UnimodularMap inv = map.inverse();
  out.correction =
      spec.correction.compose_affine(inv.matrix.cast<double>(), inv.translation);
  return out;
}

std::vector<Eigen::VectorXd> interior_grid(const Polytope& P, int per_axis) {
  std::vector<Eigen::VectorXd> pts;
  const int n = P.dim();
  const int m = per_axis;
  if (P.shape() == PolytopeShape::Triangle) {
    const auto& vs = P.vertices();
    Eigen::VectorXd v0 = vs[0].point, e1 = vs[1].point - v0, e2 = vs[2].point - v0;
    for (int i = 1; i <= m; ++i) {
      for (int j = 1; j <= m; ++j) {
        if (i + j > m) continue;
        double a = static_cast<double>(i) / (m + 1);
        double b = static_cast<double>(j) / (m + 1);
        pts.push_back(v0 + a * e1 + b * e2);
      }
    }
    return pts;
  }
  auto [lo, hi] = P.box_bounds();
  std::vector<int> idx(n, 0);
  while (true) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i)
      x[i] = lo[i] + (idx[i] + 1) * (hi[i] - lo[i]) / (m + 1);
    if (P.is_interior(x, kInteriorTol)) pts.push_back(x);
    int i = 0;
    while (i < n && ++idx[i] == m) idx[i++] = 0;
    if (i == n) break;
  }
  return pts;
}

}  // namespace toric
