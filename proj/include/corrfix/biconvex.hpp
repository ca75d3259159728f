#ifndef CORRFIX_BICONVEX_HPP
#define CORRFIX_BICONVEX_HPP

#include <map>
#include <vector>

#include "corrfix/polytope.hpp"
#include "corrfix/report.hpp"
#include "corrfix/simplex.hpp"

namespace corrfix {

/// A point of a two-factor product space.
struct ProductPoint {
  Vec x, y;
  Vec stacked() const {
    Vec s(x.size() + y.size());
    s.head(x.size()) = x;
    s.tail(y.size()) = y;
    return s;
  }
};

/// Boolean indicator over the product of two factor lattices. Factors are
/// simplices of dimension <= 2; lattice order per factor fixes the grid
/// resolution. Cells are addressed by (x-index, y-index) in lattice order.
class BiconvexGridSet {
public:
  BiconvexGridSet(SimplexDomain X, SimplexDomain Y, int order_x, int order_y);

  int nx() const { return static_cast<int>(xpts_.size()); }
  int ny() const { return static_cast<int>(ypts_.size()); }
  int order_x() const { return mx_; }
  int order_y() const { return my_; }
  const SimplexDomain& factor_x() const { return X_; }
  const SimplexDomain& factor_y() const { return Y_; }

  bool get(int ix, int iy) const { return ind_[cell(ix, iy)]; }
  void set(int ix, int iy, bool v) { ind_[cell(ix, iy)] = v; }

  const Vec& x_point(int ix) const { return xpts_[static_cast<std::size_t>(ix)]; }
  const Vec& y_point(int iy) const { return ypts_[static_cast<std::size_t>(iy)]; }
  Vec cell_point(int ix, int iy) const;

  int nearest_x_index(const Vec& x) const;
  int nearest_y_index(const Vec& y) const;

  /// Lattice-distance-1 neighbors of a cell index along one factor; cells
  /// at the lattice edge have fewer neighbors.
  std::vector<int> x_neighbors(int ix) const;
  std::vector<int> y_neighbors(int iy) const;

  /// Cell-resolution membership of a stacked product point.
  bool contains_cell(const Vec& stacked) const;

  void add_point(const ProductPoint& p);

  std::vector<std::pair<int, int>> true_cells() const;
  long count() const;
  bool same_grid(const BiconvexGridSet& o) const;
  bool operator==(const BiconvexGridSet& o) const;

  /// Run-length encoded rows ("iy ix0+len ix1+len ...") for reports.
  std::vector<std::string> rle_rows() const;

  double mesh_x() const { return X_.diameter() / mx_; }
  double mesh_y() const { return Y_.diameter() / my_; }

private:
  std::size_t cell(int ix, int iy) const {
    return static_cast<std::size_t>(ix) * static_cast<std::size_t>(ny()) +
           static_cast<std::size_t>(iy);
  }
  int nearest_index(const SimplexDomain& K, int m,
                    const std::map<std::vector<int>, int>& lookup,
                    const Vec& p) const;

  SimplexDomain X_, Y_;
  int mx_, my_;
  std::vector<Vec> xpts_, ypts_;
  std::vector<Eigen::VectorXi> xnums_, ynums_;
  std::map<std::vector<int>, int> xlookup_, ylookup_;
  std::vector<bool> ind_;
};

/// A convex combination of pairs is biconvex when all first components or
/// all second components coincide. lambda must lie on the simplex.
bool is_biconvex_combination(const std::vector<ProductPoint>& pairs,
                             const Vec& lambda, double tol = 1e-12);

/// Every x-section and y-section convex at grid resolution.
bool is_biconvex_set(const BiconvexGridSet& B);

/// Least fixpoint of section convexification over the rasterized input:
/// closes each x-section and y-section until stable. The result is biconvex
/// at grid resolution and contains the input cells.
BiconvexGridSet biconvex_hull(const std::vector<ProductPoint>& A,
                              const SimplexDomain& X, const SimplexDomain& Y,
                              int order_x, int order_y);
BiconvexGridSet biconvex_hull(const BiconvexGridSet& A);

/// Checks hull(A) subset of conv(rasterized A), cell by cell.
PropertyReport hull_subset_convex(const std::vector<ProductPoint>& A,
                                  const SimplexDomain& X,
                                  const SimplexDomain& Y, int order_x,
                                  int order_y, double tol = 1e-9);

} // namespace corrfix

#endif
