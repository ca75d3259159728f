#ifndef CORRFIX_DOMAIN_HPP
#define CORRFIX_DOMAIN_HPP

#include <vector>

#include "corrfix/simplex.hpp"

namespace corrfix {

/// Product of simplex factors; a single simplex is the one-factor case.
/// Points are the stacked factor coordinates.
class ProductDomain {
public:
  explicit ProductDomain(std::vector<SimplexDomain> factors);
  static ProductDomain single(SimplexDomain K) {
    return ProductDomain(std::vector<SimplexDomain>{std::move(K)});
  }

  const std::vector<SimplexDomain>& factors() const { return factors_; }
  int factor_count() const { return static_cast<int>(factors_.size()); }
  int ambient_dim() const { return total_dim_; }
  int factor_offset(int f) const { return offsets_[static_cast<std::size_t>(f)]; }
  Vec factor_slice(const Vec& p, int f) const;
  Vec assemble(const std::vector<Vec>& parts) const;

  bool contains_point(const Vec& p, double tol = 1e-9) const;

  /// Deterministic retraction of p onto the domain (per-factor coordinate
  /// clamp); used by local searches, whose results are re-verified.
  Vec nearest_inside(const Vec& p) const;

  double diameter() const;

  /// Lattice orders so that grid spacing per factor is <= h.
  std::vector<int> orders_for_mesh(double h) const;

  /// Product of per-factor barycentric lattices, lexicographic order.
  std::vector<Vec> grid_points(const std::vector<int>& orders) const;
  std::vector<Vec> grid_points(double h) const {
    return grid_points(orders_for_mesh(h));
  }

  Vec centroid() const;

private:
  std::vector<SimplexDomain> factors_;
  std::vector<int> offsets_;
  int total_dim_ = 0;
};

} // namespace corrfix

#endif
