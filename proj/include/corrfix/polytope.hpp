#ifndef CORRFIX_POLYTOPE_HPP
#define CORRFIX_POLYTOPE_HPP

#include <vector>

#include "corrfix/common.hpp"

namespace corrfix {

enum class Norm { linf, l2 };

/// A compact convex set stored as a vertex list; set semantics is the convex
/// hull of the vertices. The empty list is the empty set (first class: it
/// propagates through sums and intersections).
class PolytopeSet {
public:
  PolytopeSet() = default;
  explicit PolytopeSet(std::vector<Vec> vertices);
  static PolytopeSet point(const Vec& v);
  static PolytopeSet interval(double lo, double hi);

  bool empty() const { return verts_.empty(); }
  int ambient_dim() const {
    return verts_.empty() ? -1 : static_cast<int>(verts_[0].size());
  }
  std::size_t vertex_count() const { return verts_.size(); }
  const std::vector<Vec>& vertices() const { return verts_; }

  /// Euclidean distance from y to the hull, via Wolfe's min-norm-point
  /// algorithm over the convex-combination weights. +inf for the empty set.
  double distance_to(const Vec& y) const;

  /// Membership within tol. Empty set: false. Dimension mismatch: error.
  bool contains(const Vec& y, double tol) const;

  /// Minimal vertex list (extreme points only), sorted lexicographically.
  PolytopeSet canonical() const;

  /// Vertex maximizing dir . v (tie: lexicographic max). Errors when empty.
  Vec support_point(const Vec& dir) const;

  Vec centroid() const;

private:
  std::vector<Vec> verts_;
};

/// conv(P) ∩ conv(Q) in vertex representation. Emptiness is decided exactly
/// by the joint convex-combination feasibility program; vertex construction
/// uses interval/clipping fast paths in ambient dimension <= 2 and exact
/// enumeration above.
PolytopeSet intersect(const PolytopeSet& P, const PolytopeSet& Q);

/// P + rB where B is the unit ball of the chosen norm. For linf the sum is
/// exact (box corners); for l2 the ball is replaced by an inscribed
/// polytope (segment / 16-gon / 14-vertex solid by dimension).
PolytopeSet minkowski_ball_sum(const PolytopeSet& P, double r, Norm norm);

/// Cartesian product: vertices are all stacked combinations of the factors'
/// vertices. Empty if any factor is empty.
PolytopeSet product(const std::vector<PolytopeSet>& factors);

/// Convex hull of 2-d points in ccw order (collinear inputs give the two
/// extreme points). Helper shared with the grid modules.
std::vector<Vec> hull2d_ccw(std::vector<Vec> pts);

} // namespace corrfix

#endif
