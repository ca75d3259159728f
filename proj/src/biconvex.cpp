#include "corrfix/biconvex.hpp"

#include <algorithm>
#include <cmath>

namespace corrfix {

namespace {

std::vector<int> to_key(const Eigen::VectorXi& k) {
  return std::vector<int>(k.data(), k.data() + k.size());
}

} // namespace

BiconvexGridSet::BiconvexGridSet(SimplexDomain X, SimplexDomain Y, int order_x,
                                 int order_y)
    : X_(std::move(X)), Y_(std::move(Y)), mx_(order_x), my_(order_y) {
  require(mx_ >= 1 && my_ >= 1, ErrorCode::invalid_argument,
          "lattice orders must be >= 1");
  require(X_.ambient_dim() <= 2 && Y_.ambient_dim() <= 2,
          ErrorCode::invalid_dimension,
          "biconvex factors limited to dimension <= 2");
  for (const auto& k : simplex_lattice(X_.vertex_count(), mx_)) {
    xlookup_[to_key(k)] = static_cast<int>(xpts_.size());
    xpts_.push_back(X_.point_at(lattice_to_lambda(k, mx_)));
    xnums_.push_back(k);
  }
  for (const auto& k : simplex_lattice(Y_.vertex_count(), my_)) {
    ylookup_[to_key(k)] = static_cast<int>(ypts_.size());
    ypts_.push_back(Y_.point_at(lattice_to_lambda(k, my_)));
    ynums_.push_back(k);
  }
  ind_.assign(xpts_.size() * ypts_.size(), false);
}

Vec BiconvexGridSet::cell_point(int ix, int iy) const {
  const Vec& a = x_point(ix);
  const Vec& b = y_point(iy);
  Vec s(a.size() + b.size());
  s.head(a.size()) = a;
  s.tail(b.size()) = b;
  return s;
}

int BiconvexGridSet::nearest_index(const SimplexDomain& K, int m,
                                   const std::map<std::vector<int>, int>& lookup,
                                   const Vec& p) const {
  BarycentricPoint bp = K.coordinates(p, 1e-6);
  const int n = K.vertex_count();
  Eigen::VectorXi k(n);
  int sum = 0;
  Vec frac(n);
  for (int i = 0; i < n; ++i) {
    double scaled = bp.lambda[i] * m;
    k[i] = static_cast<int>(std::lround(scaled));
    frac[i] = scaled - k[i];
    sum += k[i];
  }
  // Repair rounding drift toward the exact lattice sum.
  while (sum != m) {
    int j = 0;
    if (sum < m) {
      for (int i = 1; i < n; ++i)
        if (frac[i] > frac[j]) j = i;
      k[j] += 1;
      frac[j] -= 1.0;
      ++sum;
    } else {
      for (int i = 1; i < n; ++i)
        if (frac[i] < frac[j] && k[i] > 0) j = i;
      if (k[j] == 0) {
        for (int i = 0; i < n; ++i)
          if (k[i] > 0) { j = i; break; }
      }
      k[j] -= 1;
      frac[j] += 1.0;
      --sum;
    }
  }
  auto it = lookup.find(to_key(k));
  require(it != lookup.end(), ErrorCode::invalid_argument,
          "lattice rounding produced an out-of-range cell");
  return it->second;
}

int BiconvexGridSet::nearest_x_index(const Vec& x) const {
  return nearest_index(X_, mx_, xlookup_, x);
}

int BiconvexGridSet::nearest_y_index(const Vec& y) const {
  return nearest_index(Y_, my_, ylookup_, y);
}

namespace {

std::vector<int> lattice_neighbors(const std::vector<Eigen::VectorXi>& nums,
                                   const std::map<std::vector<int>, int>& lookup,
                                   int idx) {
  std::vector<int> out;
  const Eigen::VectorXi& k = nums[static_cast<std::size_t>(idx)];
  for (Eigen::Index a = 0; a < k.size(); ++a) {
    for (Eigen::Index b = 0; b < k.size(); ++b) {
      if (a == b || k[b] == 0) continue;
      Eigen::VectorXi nb = k;
      nb[a] += 1;
      nb[b] -= 1;
      auto it = lookup.find(to_key(nb));
      if (it != lookup.end()) out.push_back(it->second);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

std::vector<int> BiconvexGridSet::x_neighbors(int ix) const {
  return lattice_neighbors(xnums_, xlookup_, ix);
}

std::vector<int> BiconvexGridSet::y_neighbors(int iy) const {
  return lattice_neighbors(ynums_, ylookup_, iy);
}

bool BiconvexGridSet::contains_cell(const Vec& stacked) const {
  require(stacked.size() == X_.ambient_dim() + Y_.ambient_dim(),
          ErrorCode::dimension_mismatch, "product point dimension mismatch");
  Vec px = stacked.head(X_.ambient_dim());
  Vec py = stacked.tail(Y_.ambient_dim());
  return get(nearest_x_index(px), nearest_y_index(py));
}

void BiconvexGridSet::add_point(const ProductPoint& p) {
  set(nearest_x_index(p.x), nearest_y_index(p.y), true);
}

std::vector<std::pair<int, int>> BiconvexGridSet::true_cells() const {
  std::vector<std::pair<int, int>> cells;
  for (int ix = 0; ix < nx(); ++ix)
    for (int iy = 0; iy < ny(); ++iy)
      if (get(ix, iy)) cells.emplace_back(ix, iy);
  return cells;
}

long BiconvexGridSet::count() const {
  return static_cast<long>(std::count(ind_.begin(), ind_.end(), true));
}

bool BiconvexGridSet::same_grid(const BiconvexGridSet& o) const {
  return mx_ == o.mx_ && my_ == o.my_ && nx() == o.nx() && ny() == o.ny() &&
         X_.ambient_dim() == o.X_.ambient_dim() &&
         Y_.ambient_dim() == o.Y_.ambient_dim();
}

bool BiconvexGridSet::operator==(const BiconvexGridSet& o) const {
  return same_grid(o) && ind_ == o.ind_;
}

std::vector<std::string> BiconvexGridSet::rle_rows() const {
  std::vector<std::string> rows;
  for (int iy = 0; iy < ny(); ++iy) {
    std::string row = std::to_string(iy) + ":";
    int run_start = -1;
    bool first = true;
    for (int ix = 0; ix <= nx(); ++ix) {
      bool v = ix < nx() && get(ix, iy);
      if (v && run_start < 0) run_start = ix;
      if (!v && run_start >= 0) {
        if (!first) row += ",";
        row += std::to_string(run_start) + "+" + std::to_string(ix - run_start);
        first = false;
        run_start = -1;
      }
    }
    if (!first) rows.push_back(row);
  }
  return rows;
}

bool is_biconvex_combination(const std::vector<ProductPoint>& pairs,
                             const Vec& lambda, double tol) {
  require(!pairs.empty(), ErrorCode::invalid_argument, "no pairs given");
  require(lambda.size() == static_cast<Eigen::Index>(pairs.size()),
          ErrorCode::dimension_mismatch, "one weight per pair required");
  BarycentricPoint check(lambda); // validates the weights
  (void)check;
  bool shared_x = true, shared_y = true;
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (!vec_approx_eq(pairs[i].x, pairs[0].x, tol)) shared_x = false;
    if (!vec_approx_eq(pairs[i].y, pairs[0].y, tol)) shared_y = false;
  }
  return shared_x || shared_y;
}

namespace {

// Convexify one section (a subset of a factor lattice). 1-d factors close
// to the index interval; 2-d factors close to the lattice points of the
// section's convex hull.
bool convexify_section(const std::vector<Vec>& pts,
                       const std::function<bool(int)>& get,
                       const std::function<void(int)>& set, int dim) {
  std::vector<int> on;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i)
    if (get(i)) on.push_back(i);
  if (on.size() <= 1) return false;
  bool changed = false;
  if (dim == 1) {
    // Lattice order is monotone in the coordinate for segment factors.
    for (int i = on.front(); i <= on.back(); ++i) {
      if (!get(i)) { set(i); changed = true; }
    }
    return changed;
  }
  std::vector<Vec> sec;
  sec.reserve(on.size());
  for (int i : on) sec.push_back(pts[static_cast<std::size_t>(i)]);
  PolytopeSet hull = PolytopeSet(sec).canonical();
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    if (get(i)) continue;
    if (hull.contains(pts[static_cast<std::size_t>(i)], 1e-9)) {
      set(i);
      changed = true;
    }
  }
  return changed;
}

} // namespace

bool is_biconvex_set(const BiconvexGridSet& B) {
  // A section is convex at grid resolution iff convexification adds nothing.
  BiconvexGridSet copy = B;
  std::vector<Vec> xs, ys;
  for (int i = 0; i < B.nx(); ++i) xs.push_back(B.x_point(i));
  for (int i = 0; i < B.ny(); ++i) ys.push_back(B.y_point(i));
  for (int ix = 0; ix < B.nx(); ++ix) {
    bool grew = convexify_section(
        ys, [&](int iy) { return copy.get(ix, iy); },
        [&](int iy) { copy.set(ix, iy, true); }, B.factor_y().ambient_dim());
    if (grew) return false;
  }
  for (int iy = 0; iy < B.ny(); ++iy) {
    bool grew = convexify_section(
        xs, [&](int ix) { return copy.get(ix, iy); },
        [&](int ix) { copy.set(ix, iy, true); }, B.factor_x().ambient_dim());
    if (grew) return false;
  }
  return true;
}

BiconvexGridSet biconvex_hull(const BiconvexGridSet& A) {
  BiconvexGridSet H = A;
  std::vector<Vec> xs, ys;
  for (int i = 0; i < H.nx(); ++i) xs.push_back(H.x_point(i));
  for (int i = 0; i < H.ny(); ++i) ys.push_back(H.y_point(i));
  const int cap = 1000;
  for (int round = 0; round < cap; ++round) {
    bool changed = false;
    for (int ix = 0; ix < H.nx(); ++ix) {
      changed |= convexify_section(
          ys, [&](int iy) { return H.get(ix, iy); },
          [&](int iy) { H.set(ix, iy, true); }, H.factor_y().ambient_dim());
    }
    for (int iy = 0; iy < H.ny(); ++iy) {
      changed |= convexify_section(
          xs, [&](int ix) { return H.get(ix, iy); },
          [&](int ix) { H.set(ix, iy, true); }, H.factor_x().ambient_dim());
    }
    if (!changed) return H;
  }
  throw Error(ErrorCode::iteration_cap,
              "biconvex hull did not stabilize in " + std::to_string(cap) +
                  " rounds (" + std::to_string(H.count()) + " cells)");
}

BiconvexGridSet biconvex_hull(const std::vector<ProductPoint>& A,
                              const SimplexDomain& X, const SimplexDomain& Y,
                              int order_x, int order_y) {
  require(!A.empty(), ErrorCode::invalid_argument,
          "biconvex hull of an empty family");
  BiconvexGridSet S(X, Y, order_x, order_y);
  for (const auto& p : A) S.add_point(p);
  return biconvex_hull(S);
}

PropertyReport hull_subset_convex(const std::vector<ProductPoint>& A,
                                  const SimplexDomain& X,
                                  const SimplexDomain& Y, int order_x,
                                  int order_y, double tol) {
  PropertyReport rep;
  rep.property = "hull-subset-convex";
  rep.grid = "product lattice " + std::to_string(order_x) + "x" +
             std::to_string(order_y) + ", conv over rasterized generators";

  BiconvexGridSet raster(X, Y, order_x, order_y);
  for (const auto& p : A) raster.add_point(p);
  std::vector<Vec> gen;
  for (const auto& [ix, iy] : raster.true_cells())
    gen.push_back(raster.cell_point(ix, iy));
  PolytopeSet conv = PolytopeSet(gen).canonical();

  BiconvexGridSet H = biconvex_hull(raster);
  double worst = 0.0;
  for (const auto& [ix, iy] : H.true_cells()) {
    Vec p = H.cell_point(ix, iy);
    double d = conv.distance_to(p);
    worst = std::max(worst, d);
    ++rep.combinations_tested;
    if (d > tol) rep.violations.push_back({p, d, "cell outside conv"});
  }
  rep.stats["max_distance"] = worst;
  rep.stats["hull_cells"] = static_cast<double>(H.count());
  rep.sort_violations();
  return rep;
}

} // namespace corrfix
