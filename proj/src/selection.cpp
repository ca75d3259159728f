#include "corrfix/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace corrfix {

Vec SelectionFunction::operator()(const Vec& x) const {
  BarycentricPoint bp = base_.coordinates(x, 1e-9);
  Vec lambda = bp.lambda;
  // Snap to a vertex so base points reproduce witness values exactly.
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (std::abs(lambda[i] - 1.0) <= 1e-13) {
      lambda.setZero();
      lambda[i] = 1.0;
      break;
    }
  }
  Vec y = Vec::Zero(value_dim());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    double w = lambda[i];
    if (kind_ == Kind::wnq && !g_.empty())
      w = g_[static_cast<std::size_t>(i)](lambda[i]);
    y += w * values_[static_cast<std::size_t>(i)];
  }
  return y;
}

bool SelectionFunction::in_domain(const Vec& x, double tol) const {
  if (!base_.contains_point(x, tol)) return false;
  if (gate_ != nullptr) return gate_->contains_cell(x);
  return true;
}

double SelectionFunction::max_g_slope() const {
  double s = 1.0;
  for (const auto& g : g_) s = std::max(s, g.max_slope());
  return s;
}

SelectionFunction build_wnq_selection(const SimplexDomain& K,
                                      const WnqWitness& w) {
  const int n = K.vertex_count();
  require(static_cast<int>(w.points.size()) == n, ErrorCode::witness_misaligned,
          "witness base point count does not match the simplex");
  require(w.values.size() == w.points.size(), ErrorCode::witness_misaligned,
          "witness value count does not match its base points");
  require(w.g.empty() || w.g.size() == w.points.size(),
          ErrorCode::witness_misaligned,
          "one reparameterization component per vertex required");
  for (int i = 0; i < n; ++i) {
    require(vec_approx_eq(w.points[static_cast<std::size_t>(i)], K.vertex(i), 1e-12),
            ErrorCode::witness_misaligned,
            "witness base point " + std::to_string(i) +
                " is not the matching simplex vertex");
  }
  return SelectionFunction(SelectionFunction::Kind::wnq, K, w.values, w.g,
                           nullptr);
}

SelectionFunction build_biconvex_selection(
    const std::vector<ProductPoint>& pairs, const BiconvexWitness& w,
    std::shared_ptr<const BiconvexGridSet> hull_gate) {
  require(!pairs.empty(), ErrorCode::invalid_argument, "no base pairs");
  require(w.values.size() == pairs.size(), ErrorCode::witness_misaligned,
          "witness value count does not match the base pairs");
  std::vector<Vec> stacked;
  stacked.reserve(pairs.size());
  for (const auto& p : pairs) stacked.push_back(p.stacked());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    require(vec_approx_eq(stacked[i], w.pairs[i], 1e-12),
            ErrorCode::witness_misaligned,
            "witness pair " + std::to_string(i) + " does not match base pair");
  }
  // SimplexDomain rejects affinely dependent pairs, as required: the
  // coordinate functions are only unique on independent base pairs.
  SimplexDomain base(stacked);
  return SelectionFunction(SelectionFunction::Kind::biconvex, std::move(base),
                           w.values, {}, std::move(hull_gate));
}

PropertyReport verify_selection(const SelectionFunction& f,
                                const Correspondence& T, int mesh, double tol) {
  require(mesh >= 1, ErrorCode::invalid_argument, "mesh order must be >= 1");
  PropertyReport rep;
  rep.property = "selection";
  const int n = f.base().vertex_count();
  rep.grid = "simplex lattice n=" + std::to_string(n) + " mesh=1/" +
             std::to_string(mesh);

  auto lattice = simplex_lattice(n, mesh);
  std::vector<Vec> xs(lattice.size());
  std::vector<Vec> fx(lattice.size());
  std::vector<char> active(lattice.size(), 0);
  std::vector<double> dist(lattice.size(), 0.0);

  parallel_for(lattice.size(), [&](std::size_t idx) {
    Vec x = f.base().point_at(lattice_to_lambda(lattice[idx], mesh));
    xs[idx] = x;
    if (!f.in_domain(x, 1e-9)) return;
    active[idx] = 1;
    fx[idx] = f(x);
    PolytopeSet v = T.evaluate(x);
    dist[idx] = v.empty() ? std::numeric_limits<double>::infinity()
                          : v.distance_to(fx[idx]);
  });

  long skipped = 0;
  double worst = 0.0;
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    if (!active[idx]) {
      ++skipped;
      continue;
    }
    ++rep.combinations_tested;
    worst = std::max(worst, dist[idx]);
    if (dist[idx] > tol)
      rep.violations.push_back({xs[idx], dist[idx], ""});
  }
  if (skipped > 0)
    rep.notes.push_back(std::to_string(skipped) +
                        " lattice points outside the selection domain skipped");

  // Empirical Lipschitz constant over adjacent lattice points.
  std::map<std::vector<int>, std::size_t> where;
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    where[std::vector<int>(lattice[idx].data(),
                           lattice[idx].data() + lattice[idx].size())] = idx;
  }
  double lip = 0.0;
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    if (!active[idx]) continue;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j || lattice[idx][j] == 0) continue;
        Eigen::VectorXi nb = lattice[idx];
        nb[i] += 1;
        nb[j] -= 1;
        auto it = where.find(std::vector<int>(nb.data(), nb.data() + nb.size()));
        if (it == where.end() || !active[it->second]) continue;
        double dx = (xs[idx] - xs[it->second]).norm();
        if (dx <= 0) continue;
        lip = std::max(lip, (fx[idx] - fx[it->second]).norm() / dx);
      }
    }
  }
  rep.stats["max_distance"] = worst;
  rep.stats["lipschitz_estimate"] = lip;
  rep.sort_violations();
  return rep;
}

} // namespace corrfix
