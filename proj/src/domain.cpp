#include "corrfix/domain.hpp"

#include <cmath>

namespace corrfix {

ProductDomain::ProductDomain(std::vector<SimplexDomain> factors)
    : factors_(std::move(factors)) {
  require(!factors_.empty(), ErrorCode::invalid_argument,
          "product domain needs at least one factor");
  offsets_.reserve(factors_.size());
  for (const auto& f : factors_) {
    offsets_.push_back(total_dim_);
    total_dim_ += f.ambient_dim();
  }
}

Vec ProductDomain::factor_slice(const Vec& p, int f) const {
  const auto& K = factors_[static_cast<std::size_t>(f)];
  return p.segment(factor_offset(f), K.ambient_dim());
}

Vec ProductDomain::assemble(const std::vector<Vec>& parts) const {
  require(parts.size() == factors_.size(), ErrorCode::dimension_mismatch,
          "factor part count mismatch");
  Vec p(total_dim_);
  for (int f = 0; f < factor_count(); ++f) {
    const auto& K = factors_[static_cast<std::size_t>(f)];
    require(parts[static_cast<std::size_t>(f)].size() == K.ambient_dim(),
            ErrorCode::dimension_mismatch, "factor part dimension mismatch");
    p.segment(factor_offset(f), K.ambient_dim()) = parts[static_cast<std::size_t>(f)];
  }
  return p;
}

bool ProductDomain::contains_point(const Vec& p, double tol) const {
  if (p.size() != total_dim_) return false;
  for (int f = 0; f < factor_count(); ++f) {
    if (!factors_[static_cast<std::size_t>(f)].contains_point(factor_slice(p, f), tol))
      return false;
  }
  return true;
}

Vec ProductDomain::nearest_inside(const Vec& p) const {
  Vec out(total_dim_);
  for (int f = 0; f < factor_count(); ++f) {
    const auto& K = factors_[static_cast<std::size_t>(f)];
    Vec part = factor_slice(p, f);
    // Least-squares coordinates, clamped and renormalized.
    Mat sys(K.ambient_dim() + 1, K.vertex_count());
    for (int j = 0; j < K.vertex_count(); ++j) {
      sys.col(j).head(K.ambient_dim()) = K.vertex(j);
      sys(K.ambient_dim(), j) = 1.0;
    }
    Vec rhs(K.ambient_dim() + 1);
    rhs.head(K.ambient_dim()) = part;
    rhs[K.ambient_dim()] = 1.0;
    Vec lambda = sys.colPivHouseholderQr().solve(rhs);
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
      if (lambda[i] < 0) lambda[i] = 0;
    double s = lambda.sum();
    if (s <= 0) {
      lambda.setConstant(1.0 / lambda.size());
    } else {
      lambda /= s;
    }
    out.segment(factor_offset(f), K.ambient_dim()) = K.point_at(lambda);
  }
  return out;
}

double ProductDomain::diameter() const {
  double d2 = 0.0;
  for (const auto& f : factors_) d2 += f.diameter() * f.diameter();
  return std::sqrt(d2);
}

std::vector<int> ProductDomain::orders_for_mesh(double h) const {
  require(h > 0, ErrorCode::invalid_argument, "grid mesh must be positive");
  std::vector<int> orders;
  orders.reserve(factors_.size());
  for (const auto& f : factors_) {
    double diam = f.diameter();
    int m = diam == 0 ? 1 : static_cast<int>(std::ceil(diam / h - 1e-12));
    orders.push_back(std::max(1, m));
  }
  return orders;
}

std::vector<Vec> ProductDomain::grid_points(const std::vector<int>& orders) const {
  require(orders.size() == factors_.size(), ErrorCode::invalid_argument,
          "one lattice order per factor required");
  std::vector<std::vector<Vec>> per_factor;
  per_factor.reserve(factors_.size());
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    const auto& K = factors_[f];
    std::vector<Vec> pts;
    for (const auto& k : simplex_lattice(K.vertex_count(), orders[f]))
      pts.push_back(K.point_at(lattice_to_lambda(k, orders[f])));
    per_factor.push_back(std::move(pts));
  }
  std::vector<Vec> acc{Vec(0)};
  for (const auto& pts : per_factor) {
    std::vector<Vec> next;
    next.reserve(acc.size() * pts.size());
    for (const auto& head : acc) {
      for (const auto& q : pts) {
        Vec w(head.size() + q.size());
        w.head(head.size()) = head;
        w.tail(q.size()) = q;
        next.push_back(std::move(w));
      }
    }
    acc = std::move(next);
  }
  return acc;
}

Vec ProductDomain::centroid() const {
  std::vector<Vec> parts;
  parts.reserve(factors_.size());
  for (const auto& f : factors_) parts.push_back(f.centroid());
  return assemble(parts);
}

} // namespace corrfix
