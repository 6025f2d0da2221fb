#include "toric/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace toric {

namespace {

constexpr double kGeomTol = 1e-9;

int gcd_abs(const Eigen::VectorXi& v) {
  int g = 0;
  for (int i = 0; i < v.size(); ++i) g = std::gcd(g, std::abs(v[i]));
  return g;
}

// All size-k subsets of {0,...,m-1} in lexicographic order.
void for_each_subset(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > m) return;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

long long int_det(const Eigen::MatrixXi& A) {
  const int n = static_cast<int>(A.rows());
  if (n == 1) return A(0, 0);
  if (n == 2) return (long long)A(0, 0) * A(1, 1) - (long long)A(0, 1) * A(1, 0);
  long long det = 0;
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXi minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = A(r, c);
      }
    }
    long long cofactor = int_det(minor);
    det += (j % 2 == 0 ? 1 : -1) * (long long)A(0, j) * cofactor;
  }
  return det;
}

}  // namespace

Polytope Polytope::build(std::vector<Facet> facets) {
  if (facets.empty()) throw PolytopeError("no facets given");
  const int n = static_cast<int>(facets[0].normal.size());
  if (n < 1) throw PolytopeError("zero-dimensional normal");
  for (const auto& f : facets) {
    if (static_cast<int>(f.normal.size()) != n)
      throw DimensionMismatch("facet normals have inconsistent dimensions");
    if (f.normal.isZero()) throw NonPrimitiveNormal("zero facet normal");
    if (gcd_abs(f.normal) != 1)
      throw NonPrimitiveNormal("facet normal is not primitive");
  }
  const int d = static_cast<int>(facets.size());
  if (d < n + 1) throw Unbounded("fewer than n+1 facets");

  // Recession cone must be {0}: normals span R^n, and no candidate extreme
  // ray (nullspace of an (n-1)-subset of normals) satisfies all inequalities.
  Eigen::MatrixXd N(d, n);
  for (int k = 0; k < d; ++k) N.row(k) = facets[k].normal.cast<double>();
  if (Eigen::FullPivLU<Eigen::MatrixXd>(N).rank() < n)
    throw Unbounded("facet normals do not span");
  auto is_recession_dir = [&](const Eigen::VectorXd& dir) {
    if (dir.norm() < kGeomTol) return false;
    Eigen::VectorXd u = dir / dir.norm();
    for (int k = 0; k < d; ++k)
      if (N.row(k).dot(u) < -kGeomTol) return false;
    return true;
  };
  if (n == 1) {
    if (is_recession_dir(Eigen::VectorXd::Ones(1)) ||
        is_recession_dir(-Eigen::VectorXd::Ones(1)))
      throw Unbounded("interval is unbounded");
  } else {
    for_each_subset(d, n - 1, [&](const std::vector<int>& sub) {
      Eigen::MatrixXd S(n - 1, n);
      for (int r = 0; r < n - 1; ++r) S.row(r) = N.row(sub[r]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
      if (lu.rank() < n - 1) return;
      Eigen::MatrixXd kernel = lu.kernel();
      for (int c = 0; c < kernel.cols(); ++c) {
        if (is_recession_dir(kernel.col(c)) || is_recession_dir(-kernel.col(c)))
          throw Unbounded("polytope has a recession direction");
      }
    });
  }

  // Vertex enumeration by exhaustive n-subset intersection.
  std::vector<Vertex> vertices;
  Eigen::VectorXd offsets(d);
  for (int k = 0; k < d; ++k) offsets[k] = facets[k].offset;
  for_each_subset(d, n, [&](const std::vector<int>& sub) {
    Eigen::MatrixXd S(n, n);
    Eigen::VectorXd c(n);
    for (int r = 0; r < n; ++r) {
      S.row(r) = N.row(sub[r]);
      c[r] = offsets[sub[r]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
    if (lu.rank() < n) return;
    Eigen::VectorXd x = lu.solve(c);
    for (int k = 0; k < d; ++k)
      if (N.row(k).dot(x) - offsets[k] < -kGeomTol) return;
    for (const auto& v : vertices)
      if ((v.point - x).norm() < kGeomTol) return;
    Vertex v;
    v.point = x;
    for (int k = 0; k < d; ++k)
      if (std::abs(N.row(k).dot(x) - offsets[k]) < kGeomTol)
        v.incident_facets.push_back(k);
    vertices.push_back(std::move(v));
  });
  // Boundedness was already established from the normal fan, so a bounded
  // region without vertices can only be empty.
  if (vertices.empty()) throw EmptyInterior("feasible set is empty");
  std::sort(vertices.begin(), vertices.end(), [](const Vertex& a, const Vertex& b) {
    for (int i = 0; i < a.point.size(); ++i) {
      if (a.point[i] < b.point[i] - kGeomTol) return true;
      if (a.point[i] > b.point[i] + kGeomTol) return false;
    }
    return false;
  });

  // Delzant condition: exactly n incident facets whose normals form a
  // lattice basis.
  for (const auto& v : vertices) {
    if (static_cast<int>(v.incident_facets.size()) != n)
      throw NonDelzantVertex("vertex is not simple");
    Eigen::MatrixXi B(n, n);
    for (int r = 0; r < n; ++r) B.row(r) = facets[v.incident_facets[r]].normal;
    if (std::abs(int_det(B)) != 1)
      throw NonDelzantVertex("incident normals are not a lattice basis");
  }

  Polytope P;
  P.dim_ = n;
  P.facets_ = std::move(facets);
  P.vertices_ = std::move(vertices);

  Eigen::VectorXd c0 = P.centroid();
  if (P.min_facet_value(c0) < kGeomTol)
    throw EmptyInterior("centroid is not strictly interior");
  return P;
}

Polytope Polytope::named(const std::string& name) {
  auto facet = [](std::vector<int> normal, double offset) {
    Facet f;
    f.normal = Eigen::Map<Eigen::VectorXi>(normal.data(), normal.size());
    f.offset = offset;
    return f;
  };
  if (name == "interval")
    return build({facet({1}, -1.0), facet({-1}, -1.0)});
  if (name == "square")
    return build({facet({1, 0}, 0.0), facet({0, 1}, 0.0), facet({-1, 0}, -1.0),
                  facet({0, -1}, -1.0)});
  if (name == "square2")
    return build({facet({1, 0}, -1.0), facet({0, 1}, -1.0),
                  facet({-1, 0}, -1.0), facet({0, -1}, -1.0)});
  if (name == "simplex")
    return build({facet({1, 0}, 0.0), facet({0, 1}, 0.0), facet({-1, -1}, -1.0)});
  throw PolytopeError("unknown polytope name: " + name);
}

Eigen::VectorXd Polytope::facet_values(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw DimensionMismatch("point has wrong dimension");
  Eigen::VectorXd v(facets_.size());
  for (size_t k = 0; k < facets_.size(); ++k)
    v[k] = facets_[k].normal.cast<double>().dot(x) - facets_[k].offset;
  return v;
}

double Polytope::min_facet_value(const Eigen::VectorXd& x) const {
  return facet_values(x).minCoeff();
}

bool Polytope::is_interior(const Eigen::VectorXd& x, double tol) const {
  return min_facet_value(x) >= tol;
}

Eigen::VectorXd Polytope::centroid() const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim_);
  for (const auto& v : vertices_) c += v.point;
  return c / static_cast<double>(vertices_.size());
}

double Polytope::diameter() const {
  double diam = 0.0;
  for (size_t i = 0; i < vertices_.size(); ++i)
    for (size_t j = i + 1; j < vertices_.size(); ++j)
      diam = std::max(diam, (vertices_[i].point - vertices_[j].point).norm());
  return diam;
}

PolytopeShape Polytope::shape() const {
  if (dim_ == 1) return PolytopeShape::Interval;
  if (dim_ == 2) {
    if (facets_.size() == 3 && vertices_.size() == 3) return PolytopeShape::Triangle;
    bool axis_aligned = true;
    for (const auto& f : facets_) {
      int nonzero = 0;
      for (int i = 0; i < dim_; ++i)
        if (f.normal[i] != 0) ++nonzero;
      if (nonzero != 1 || f.normal.cwiseAbs().maxCoeff() != 1) axis_aligned = false;
    }
    if (axis_aligned && facets_.size() == 4) return PolytopeShape::Box;
  }
  return PolytopeShape::Unsupported;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> Polytope::box_bounds() const {
  Eigen::VectorXd lo = vertices_[0].point, hi = vertices_[0].point;
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v.point);
    hi = hi.cwiseMax(v.point);
  }
  return {lo, hi};
}

Eigen::VectorXd UnimodularMap::apply(const Eigen::VectorXd& x) const {
  return matrix.cast<double>() * x + translation;
}

UnimodularMap UnimodularMap::inverse() const {
  UnimodularMap inv;
  inv.matrix = unimodular_inverse(matrix);
  inv.translation = -(inv.matrix.cast<double>() * translation);
  return inv;
}

UnimodularMap UnimodularMap::identity(int n) {
  UnimodularMap m;
  m.matrix = Eigen::MatrixXi::Identity(n, n);
  m.translation = Eigen::VectorXd::Zero(n);
  return m;
}

Eigen::MatrixXi unimodular_inverse(const Eigen::MatrixXi& A) {
  long long det = int_det(A);
  if (det != 1 && det != -1)
    throw PolytopeError("matrix is not unimodular");
  // Determinant +-1 makes the double inverse exactly integer; round to kill
  // floating point dust.
  Eigen::MatrixXd inv = A.cast<double>().inverse();
  Eigen::MatrixXi out(A.rows(), A.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) out(i, j) = (int)std::llround(inv(i, j));
  return out;
}

Polytope map_polytope(const Polytope& P, const UnimodularMap& map) {
  // y = A x + t turns l(x) = nu.x - c into nu'.y - c' with nu' = A^{-t} nu
  // and c' = c + nu'.t.
  Eigen::MatrixXi Ainv = unimodular_inverse(map.matrix);
  std::vector<Facet> facets;
  for (const auto& f : P.facets()) {
    Facet g;
    g.normal = Ainv.transpose() * f.normal;
    g.offset = f.offset + g.normal.cast<double>().dot(map.translation);
    facets.push_back(std::move(g));
  }
  return Polytope::build(std::move(facets));
}

std::pair<Polytope, UnimodularMap> standardize_at_vertex(const Polytope& P,
                                                         int vertex_index) {
  if (vertex_index < 0 || vertex_index >= static_cast<int>(P.vertices().size()))
    throw InvalidVertex("vertex index out of range");
  const Vertex& v = P.vertices()[vertex_index];
  const int n = P.dim();
  // With A the matrix of incident normals, y = A(x - vertex) sends the
  // incident facets to {y_i > 0} and the vertex to 0.
  Eigen::MatrixXi A(n, n);
  for (int r = 0; r < n; ++r) A.row(r) = P.facets()[v.incident_facets[r]].normal;
  UnimodularMap map;
  map.matrix = A;
  map.translation = -(A.cast<double>() * v.point);
  return {map_polytope(P, map), map};
}

}  // namespace toric
