#ifndef CORRFIX_SIMPLEX_HPP
#define CORRFIX_SIMPLEX_HPP

#include <memory>
#include <vector>

#include "corrfix/common.hpp"

namespace corrfix {

/// A coefficient vector on the standard simplex: nonnegative, sums to 1
/// within 1e-12. Construction validates.
struct BarycentricPoint {
  Vec lambda;
  explicit BarycentricPoint(Vec l);
  int size() const { return static_cast<int>(lambda.size()); }
};

/// The convex hull of n affinely independent points in R^d (d >= n-1),
/// with a cached affine-system factorization for coordinate queries.
/// Immutable after construction; all methods are const and reentrant.
class SimplexDomain {
public:
  explicit SimplexDomain(std::vector<Vec> vertices);

  int vertex_count() const { return static_cast<int>(verts_.size()); }
  int ambient_dim() const { return static_cast<int>(verts_[0].size()); }
  const std::vector<Vec>& vertices() const { return verts_; }
  const Vec& vertex(int i) const { return verts_[static_cast<std::size_t>(i)]; }

  /// x = sum_i lambda_i a_i.
  Vec point_at(const Vec& lambda) const;
  Vec point_at(const BarycentricPoint& bp) const { return point_at(bp.lambda); }

  /// Barycentric coordinates of p. Coordinates within `tol` outside a facet
  /// are clamped to the facet and renormalized; farther points raise
  /// OutsideDomainError carrying the hull distance.
  BarycentricPoint coordinates(const Vec& p, double tol = 1e-9) const;

  bool contains_point(const Vec& p, double tol = 1e-9) const;

  double diameter() const;
  double volume() const;
  Vec centroid() const;

private:
  std::vector<Vec> verts_;
  Mat vmat_;                                        // d x n vertex matrix
  std::shared_ptr<const Eigen::ColPivHouseholderQR<Mat>> qr_; // of [V; 1^T]
};

/// Canonical standard simplex: n unit vectors in R^n.
SimplexDomain standard_simplex(int n);

/// One cell of the order-m edgewise (union-jack) subdivision, stored as the
/// integer barycentric numerators of its n vertices (each sums to m).
struct LatticeCell {
  std::vector<Eigen::VectorXi> numerators;
};

/// Cells of the order-m subdivision of the (n-1)-simplex in lattice form.
/// Exactly m^(n-1) cells; vertices are exact multiples of 1/m.
std::vector<LatticeCell> kuhn_lattice_cells(int n, int m);

/// The order-m Kuhn triangulation of K: m^(n-1) cells tiling K with disjoint
/// interiors, each of diameter <= diam(K)/m.
std::vector<SimplexDomain> kuhn_triangulate(const SimplexDomain& K, int m);

/// All integer vectors k >= 0 with sum(k) = m, lexicographic order.
/// These are the barycentric numerators of the order-m simplex lattice.
std::vector<Eigen::VectorXi> simplex_lattice(int n, int m);

Vec lattice_to_lambda(const Eigen::VectorXi& k, int m);

} // namespace corrfix

#endif
