#include "corrfix/convexity.hpp"

#include <algorithm>
#include <cmath>

namespace corrfix {

namespace {

void validate_witness_points(const Correspondence& T, const std::vector<Vec>& xs,
                             const std::vector<Vec>& ys, double tol) {
  require(!xs.empty() && xs.size() == ys.size(), ErrorCode::witness_invalid,
          "witness needs matching nonempty point/value lists");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(T.domain().contains_point(xs[i], 1e-9), ErrorCode::witness_invalid,
            "witness base point " + std::to_string(i) + " outside the domain");
    PolytopeSet v = T.evaluate(xs[i]);
    if (v.empty() || !v.contains(ys[i], tol)) {
      throw Error(ErrorCode::witness_invalid,
                  "witness value " + std::to_string(i) +
                      " is not a member of T(x_" + std::to_string(i) + ")");
    }
  }
}

// Shared lambda-lattice sweep: y(lambda) = sum_i w_i(lambda_i) y_i must lie
// in T(sum_i lambda_i x_i). The WCG sweep is the identity-weights case.
PropertyReport sweep_combinations(const Correspondence& T,
                                  const std::vector<Vec>& xs,
                                  const std::vector<Vec>& ys,
                                  const WnqWitness* wnq, int mesh, double tol,
                                  const std::string& property) {
  const int n = static_cast<int>(xs.size());
  PropertyReport rep;
  rep.property = property;
  rep.grid = "simplex lattice n=" + std::to_string(n) +
             " mesh=1/" + std::to_string(mesh);

  auto lattice = simplex_lattice(n, mesh);
  rep.combinations_tested = static_cast<long>(lattice.size());

  if (wnq != nullptr && !wnq->identity_g()) {
    double worst = 0.0;
    for (const auto& k : lattice) {
      Vec lambda = lattice_to_lambda(k, mesh);
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += wnq->g_at(static_cast<std::size_t>(i))(lambda[i]);
      worst = std::max(worst, std::abs(s - 1.0));
    }
    if (worst > 1e-9) {
      throw Error(ErrorCode::witness_normalization,
                  "reparameterization family is inconsistent: max |sum g_i - 1| = " +
                      fmt_double(worst) + " on the sweep grid");
    }
  }

  std::vector<double> dist(lattice.size(), 0.0);
  parallel_for(lattice.size(), [&](std::size_t idx) {
    Vec lambda = lattice_to_lambda(lattice[idx], mesh);
    Vec x = Vec::Zero(xs[0].size());
    for (int i = 0; i < n; ++i) x += lambda[i] * xs[static_cast<std::size_t>(i)];
    Vec y = Vec::Zero(ys[0].size());
    for (int i = 0; i < n; ++i) {
      double w = wnq ? wnq->g_at(static_cast<std::size_t>(i))(lambda[i]) : lambda[i];
      y += w * ys[static_cast<std::size_t>(i)];
    }
    PolytopeSet v = T.evaluate(x);
    dist[idx] = v.empty() ? std::numeric_limits<double>::infinity()
                          : v.distance_to(y);
  });

  double worst = 0.0;
  for (std::size_t idx = 0; idx < lattice.size(); ++idx) {
    worst = std::max(worst, dist[idx]);
    if (dist[idx] > tol) {
      rep.violations.push_back(
          {lattice_to_lambda(lattice[idx], mesh), dist[idx], ""});
    }
  }
  rep.stats["max_distance"] = worst;
  rep.sort_violations();
  return rep;
}

} // namespace

PropertyReport check_wcg(const Correspondence& T, const WcgWitness& w, int mesh,
                         double tol) {
  require(mesh >= 1, ErrorCode::invalid_argument, "mesh order must be >= 1");
  validate_witness_points(T, w.points, w.values, tol);
  return sweep_combinations(T, w.points, w.values, nullptr, mesh, tol, "wcg");
}

PropertyReport check_wnq(const Correspondence& T, const WnqWitness& w, int mesh,
                         double tol) {
  require(mesh >= 1, ErrorCode::invalid_argument, "mesh order must be >= 1");
  require(w.g.empty() || w.g.size() == w.points.size(),
          ErrorCode::witness_invalid,
          "need one reparameterization component per base point");
  validate_witness_points(T, w.points, w.values, tol);
  return sweep_combinations(T, w.points, w.values, &w, mesh, tol, "wnq");
}

PropertyReport check_weakly_biconvex(const Correspondence& T,
                                     const BiconvexGridSet* B,
                                     const BiconvexWitness& w, int mesh,
                                     double tol) {
  require(mesh >= 1, ErrorCode::invalid_argument, "mesh order must be >= 1");
  require(!w.pairs.empty() && w.pairs.size() == w.values.size(),
          ErrorCode::witness_invalid,
          "witness needs matching nonempty pair/value lists");
  require(w.x_dim > 0 && w.x_dim < w.pairs[0].size(),
          ErrorCode::witness_invalid, "invalid factor split");
  const int n = static_cast<int>(w.pairs.size());

  for (int i = 0; i < n; ++i) {
    const Vec& p = w.pairs[static_cast<std::size_t>(i)];
    require(T.domain().contains_point(p, 1e-9), ErrorCode::witness_invalid,
            "witness pair " + std::to_string(i) + " outside the domain");
    if (B != nullptr) {
      require(B->contains_cell(p), ErrorCode::witness_invalid,
              "witness pair " + std::to_string(i) +
                  " outside the declared biconvex set");
    }
    PolytopeSet v = T.evaluate(p);
    if (v.empty() || !v.contains(w.values[static_cast<std::size_t>(i)], tol)) {
      throw Error(ErrorCode::witness_invalid,
                  "witness value " + std::to_string(i) +
                      " is not a member of T at its pair");
    }
  }

  PropertyReport rep;
  rep.property = "weakly-biconvex";
  rep.grid = "simplex lattice n=" + std::to_string(n) + " mesh=1/" +
             std::to_string(mesh);

  bool shared_x = true, shared_y = true;
  for (int i = 1; i < n; ++i) {
    const Vec& p = w.pairs[static_cast<std::size_t>(i)];
    const Vec& p0 = w.pairs[0];
    if (!vec_approx_eq(p.head(w.x_dim), p0.head(w.x_dim), 1e-12)) shared_x = false;
    if (!vec_approx_eq(p.tail(p.size() - w.x_dim), p0.tail(p0.size() - w.x_dim), 1e-12))
      shared_y = false;
  }
  if (!shared_x && !shared_y) {
    rep.notes.push_back("no biconvex combinations (mixed pairs); vacuous pass");
    return rep;
  }
  rep.notes.push_back(shared_x ? "shared-x family" : "shared-y family");

  long skipped = 0;
  double worst = 0.0;
  for (const auto& k : simplex_lattice(n, mesh)) {
    Vec lambda = lattice_to_lambda(k, mesh);
    Vec p = Vec::Zero(w.pairs[0].size());
    for (int i = 0; i < n; ++i) p += lambda[i] * w.pairs[static_cast<std::size_t>(i)];
    if (B != nullptr && !B->contains_cell(p)) {
      ++skipped;
      continue;
    }
    Vec z = Vec::Zero(w.values[0].size());
    for (int i = 0; i < n; ++i) z += lambda[i] * w.values[static_cast<std::size_t>(i)];
    PolytopeSet v = T.evaluate(p);
    double d = v.empty() ? std::numeric_limits<double>::infinity()
                         : v.distance_to(z);
    ++rep.combinations_tested;
    worst = std::max(worst, d);
    if (d > tol) rep.violations.push_back({lambda, d, ""});
  }
  if (skipped > 0)
    rep.notes.push_back(std::to_string(skipped) +
                        " combinations outside the biconvex set skipped");
  rep.stats["max_distance"] = worst;
  rep.sort_violations();
  return rep;
}

PropertyReport check_star_variant(const Correspondence& T, StarBase base,
                                  const std::vector<double>& radii,
                                  const std::vector<WnqWitness>& witnesses,
                                  int mesh, double tol) {
  require(!radii.empty(), ErrorCode::invalid_argument, "need at least one radius");
  require(witnesses.size() == radii.size(), ErrorCode::invalid_argument,
          "need one witness per radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] > 0, ErrorCode::invalid_argument, "radii must be positive");
    if (i > 0)
      require(radii[i] < radii[i - 1], ErrorCode::invalid_argument,
              "radii must be strictly decreasing");
  }

  PropertyReport rep;
  rep.property = base == StarBase::wcg ? "star-wcg" : "star-wnq";
  rep.grid = "per-radius simplex lattice mesh=1/" + std::to_string(mesh);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    Correspondence Tr = thicken(T, radii[i]);
    const WnqWitness& w = witnesses[i];
    PropertyReport sub =
        base == StarBase::wcg
            ? check_wcg(Tr, WcgWitness{w.points, w.values}, mesh, tol)
            : check_wnq(Tr, w, mesh, tol);
    rep.merge_tagged(sub, "r=" + fmt_double(radii[i]));
  }
  rep.sort_violations();
  return rep;
}

namespace {

// Candidate values for one base point: hull vertices plus a lattice of hull
// combinations at the requested density, lexicographic, deduplicated.
std::vector<Vec> value_candidates(const PolytopeSet& v, int density) {
  std::vector<Vec> cands;
  if (v.empty()) return cands;
  PolytopeSet c = v.canonical();
  for (const auto& p : c.vertices()) cands.push_back(p);
  if (density >= 2 && c.vertex_count() >= 2) {
    const int k = static_cast<int>(c.vertex_count());
    for (const auto& key : simplex_lattice(k, density)) {
      Vec lambda = lattice_to_lambda(key, density);
      Vec p = Vec::Zero(c.vertices()[0].size());
      for (int i = 0; i < k; ++i) p += lambda[i] * c.vertices()[static_cast<std::size_t>(i)];
      cands.push_back(p);
    }
  }
  std::sort(cands.begin(), cands.end(), lex_less);
  cands.erase(std::unique(cands.begin(), cands.end(),
                          [](const Vec& a, const Vec& b) {
                            return vec_approx_eq(a, b, 1e-12);
                          }),
              cands.end());
  return cands;
}

std::vector<std::vector<PiecewiseLinearMap>> g_catalog(int n, int family_size) {
  std::vector<std::vector<PiecewiseLinearMap>> cat;
  cat.push_back({}); // identity family
  if (n != 2) {
    // With the simplex-normalization constraint, nonlinear componentwise
    // families only exist for two base points.
    return cat;
  }
  const double powers[] = {2.0, 0.5, 3.0, 1.0 / 3.0, 4.0, 0.25};
  int added = 0;
  for (double p : powers) {
    if (added + 1 >= family_size) break;
    PiecewiseLinearMap g1 = PiecewiseLinearMap::power_samples(p, 8);
    cat.push_back({g1, g1.complement()});
    ++added;
  }
  return cat;
}

} // namespace

WitnessSearchResult search_witness(const Correspondence& T, StarBase property,
                                   const std::vector<Vec>& base_points,
                                   int value_density, int g_family_size,
                                   int mesh, double tol) {
  require(!base_points.empty(), ErrorCode::invalid_argument,
          "witness search needs base points");
  WitnessSearchResult res;
  const int n = static_cast<int>(base_points.size());

  std::vector<std::vector<Vec>> cands;
  for (const auto& x : base_points) {
    auto c = value_candidates(T.evaluate(x), value_density);
    if (c.empty()) return res; // empty value: no witness can exist
    cands.push_back(std::move(c));
  }
  auto gs = property == StarBase::wcg
                ? std::vector<std::vector<PiecewiseLinearMap>>{{}}
                : g_catalog(n, std::max(1, g_family_size));

  std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
  for (;;) {
    std::vector<Vec> values;
    values.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      values.push_back(cands[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]]);
    for (const auto& g : gs) {
      WnqWitness w{base_points, values, g};
      ++res.candidates_tested;
      try {
        PropertyReport rep = property == StarBase::wcg
                                 ? check_wcg(T, WcgWitness{w.points, w.values},
                                             mesh, tol)
                                 : check_wnq(T, w, mesh, tol);
        if (rep.pass()) {
          res.witness = std::move(w);
          return res;
        }
      } catch (const Error&) {
        // Inconsistent candidate (normalization or membership); keep going.
      }
    }
    int i = n - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] + 1 ==
                         cands[static_cast<std::size_t>(i)].size()) {
      pick[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    pick[static_cast<std::size_t>(i)] += 1;
  }
  return res;
}

} // namespace corrfix
