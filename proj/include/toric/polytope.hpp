#ifndef TORIC_POLYTOPE_HPP
#define TORIC_POLYTOPE_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace toric {

struct PolytopeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonPrimitiveNormal : PolytopeError {
  using PolytopeError::PolytopeError;
};
struct Unbounded : PolytopeError {
  using PolytopeError::PolytopeError;
};
struct NonDelzantVertex : PolytopeError {
  using PolytopeError::PolytopeError;
};
struct EmptyInterior : PolytopeError {
  using PolytopeError::PolytopeError;
};
struct DimensionMismatch : PolytopeError {
  using PolytopeError::PolytopeError;
};
struct InvalidVertex : PolytopeError {
  using PolytopeError::PolytopeError;
};

/// One half-space x . normal - offset > 0 cutting out the polytope.
/// The normal is a primitive integer lattice vector.
struct Facet {
  Eigen::VectorXi normal;
  double offset = 0.0;
};

struct Vertex {
  Eigen::VectorXd point;
  std::vector<int> incident_facets;  // sorted indices into the facet list
};

/// Geometry shapes the solver back-end knows how to discretize.
enum class PolytopeShape { Interval, Box, Triangle, Unsupported };

/// A validated Delzant polytope: bounded intersection of half-spaces, with
/// primitive normals forming a lattice basis at every vertex.
class Polytope {
public:
  /// An empty placeholder; only build() / named() produce usable polytopes.
  Polytope() = default;

  /// Validates facet data, enumerates vertices, checks the Delzant
  /// condition. Throws NonPrimitiveNormal, Unbounded, NonDelzantVertex or
  /// EmptyInterior on bad input.
  static Polytope build(std::vector<Facet> facets);

  /// Built-in polytopes: "interval" = (-1,1), "square" = unit square,
  /// "square2" = [-1,1]^2, "simplex" = standard 2-simplex.
  static Polytope named(const std::string& name);

  int dim() const { return dim_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  /// (l_1(x), ..., l_d(x)) with l_k = x . nu_k - c_k.
  Eigen::VectorXd facet_values(const Eigen::VectorXd& x) const;
  double min_facet_value(const Eigen::VectorXd& x) const;
  bool is_interior(const Eigen::VectorXd& x, double tol = 1e-10) const;

  Eigen::VectorXd centroid() const;
  double diameter() const;

  PolytopeShape shape() const;
  /// Per-axis bounds, valid when shape() is Interval or Box.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> box_bounds() const;

private:
  int dim_ = 0;
  std::vector<Facet> facets_;
  std::vector<Vertex> vertices_;
};

/// Affine lattice map y = A x + t with A integer unimodular.
struct UnimodularMap {
  Eigen::MatrixXi matrix;
  Eigen::VectorXd translation;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  UnimodularMap inverse() const;
  static UnimodularMap identity(int n);
};

/// Integer inverse of a unimodular matrix (determinant +-1).
Eigen::MatrixXi unimodular_inverse(const Eigen::MatrixXi& A);

/// Image of P under the map (facets transported as nu' = A^{-t} nu).
Polytope map_polytope(const Polytope& P, const UnimodularMap& map);

/// The affine unimodular map sending the given vertex to 0 and its incident
/// facet normals to the canonical basis, together with the image polytope.
std::pair<Polytope, UnimodularMap> standardize_at_vertex(const Polytope& P,
                                                         int vertex_index);

}  // namespace toric

#endif
