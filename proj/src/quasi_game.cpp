#include "corrfix/quasi_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace corrfix {

QuasiGame::QuasiGame(std::vector<AgentSpec> agents) : agents_(std::move(agents)) {
  require(!agents_.empty(), ErrorCode::invalid_argument, "game needs agents");
  require(agents_.size() <= 4, ErrorCode::invalid_argument,
          "agent count capped at 4 (desk scale)");
  std::vector<SimplexDomain> xfactors;
  for (const auto& a : agents_) {
    require(a.strategy.ambient_dim() <= 2, ErrorCode::invalid_dimension,
            "strategy simplices limited to dimension <= 2");
    xfactors.push_back(a.strategy);
  }
  X_ = std::make_shared<ProductDomain>(xfactors);
  std::vector<SimplexDomain> zfactors = xfactors;
  zfactors.insert(zfactors.end(), xfactors.begin(), xfactors.end());
  Z_ = std::make_shared<ProductDomain>(zfactors);

  for (const auto& a : agents_) {
    require(a.A.domain().ambient_dim() == Z_->ambient_dim() &&
                a.B.domain().ambient_dim() == Z_->ambient_dim() &&
                a.P.domain().ambient_dim() == Z_->ambient_dim(),
            ErrorCode::dimension_mismatch,
            "agent correspondences must be defined over Z = X x X");
  }

  wi_simplex_.resize(agents_.size());
  wi_hull_.resize(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const auto& wi = agents_[i].wi;
    if (wi.kind == WiStructure::Kind::simplex) {
      require(!wi.generators.empty(), ErrorCode::invalid_argument,
              "simplex W declaration needs generators");
      wi_simplex_[i] = SimplexDomain(wi.generators);
      require(wi_simplex_[i]->ambient_dim() == Z_->ambient_dim(),
              ErrorCode::dimension_mismatch,
              "W generators must live in the Z space");
    } else if (wi.kind == WiStructure::Kind::biconvex_hull) {
      require(agent_count() == 1, ErrorCode::invalid_argument,
              "biconvex W structure supported for single-agent games, where "
              "both product factors are simplices");
      const SimplexDomain& F = agents_[0].strategy;
      std::vector<ProductPoint> pairs;
      for (const auto& g : wi.generators) {
        require(g.size() == Z_->ambient_dim(), ErrorCode::dimension_mismatch,
                "W generators must live in the Z space");
        ProductPoint p;
        p.x = g.head(F.ambient_dim());
        p.y = g.tail(F.ambient_dim());
        pairs.push_back(std::move(p));
      }
      wi_hull_[i] = std::make_shared<const BiconvexGridSet>(
          biconvex_hull(pairs, F, F, wi.hull_order, wi.hull_order));
    }
  }
}

Vec QuasiGame::x_part(const Vec& z, int i) const {
  return Z_->factor_slice(z, i);
}

Vec QuasiGame::y_part(const Vec& z, int i) const {
  return Z_->factor_slice(z, agent_count() + i);
}

PolytopeSet QuasiGame::a_cap_p(int i, const Vec& z) const {
  const auto& a = agents_[static_cast<std::size_t>(i)];
  PolytopeSet av = a.A.evaluate(z);
  if (av.empty()) return PolytopeSet();
  PolytopeSet pv = a.P.evaluate(z);
  if (pv.empty()) return PolytopeSet();
  return intersect(av, pv);
}

QuasiGame::Emptiness QuasiGame::a_cap_p_exact(int i, const Vec& z) const {
  const auto& a = agents_[static_cast<std::size_t>(i)];
  PolytopeSet av = a.A.evaluate(z);
  if (av.empty()) return {true, "empty-value:A"};
  PolytopeSet pv = a.P.evaluate(z);
  if (pv.empty()) return {true, "empty-value:P"};
  auto feas = ratlp::intersection_program(av.vertices(), pv.vertices());
  return {!feas.feasible, ratlp::token(feas)};
}

bool QuasiGame::declared_wi_contains(int i, const Vec& z) const {
  const auto& wi = agents_[static_cast<std::size_t>(i)].wi;
  switch (wi.kind) {
    case WiStructure::Kind::empty:
      return false;
    case WiStructure::Kind::simplex: {
      const auto& W = *wi_simplex_[static_cast<std::size_t>(i)];
      try {
        BarycentricPoint bp = W.coordinates(z, 1e-9);
        return bp.lambda.minCoeff() > 1e-9; // interior of the simplex
      } catch (const OutsideDomainError&) {
        return false;
      }
    }
    case WiStructure::Kind::biconvex_hull: {
      const auto& H = *wi_hull_[static_cast<std::size_t>(i)];
      const SimplexDomain& F = agents_[0].strategy;
      Vec px = z.head(F.ambient_dim());
      Vec py = z.tail(F.ambient_dim());
      int ix = H.nearest_x_index(px);
      int iy = H.nearest_y_index(py);
      if (!H.get(ix, iy)) return false;
      // Interior at grid scale: every lattice neighbor cell is in the hull;
      // cells at the lattice edge count as boundary.
      auto xs = H.x_neighbors(ix);
      auto ys = H.y_neighbors(iy);
      if (static_cast<int>(xs.size()) <
              (H.factor_x().vertex_count() - 1) * 2 ||
          static_cast<int>(ys.size()) <
              (H.factor_y().vertex_count() - 1) * 2)
        return false;
      for (int nx : xs)
        for (int ny : ys)
          if (!H.get(nx, ny)) return false;
      for (int nx : xs)
        if (!H.get(nx, iy)) return false;
      for (int ny : ys)
        if (!H.get(ix, ny)) return false;
      return true;
    }
  }
  return false;
}

std::shared_ptr<const BiconvexGridSet> QuasiGame::wi_hull(int i) const {
  return wi_hull_[static_cast<std::size_t>(i)];
}

RegionWi compute_wi(const QuasiGame& G, int i, int grid_order) {
  RegionWi region;
  region.agent = i;
  region.grid_order = grid_order;
  const auto& wi = G.agent(i).wi;
  region.structure = wi.kind == WiStructure::Kind::empty ? "empty"
                     : wi.kind == WiStructure::Kind::simplex
                         ? "open-with-simplex-closure"
                         : "interior-of-biconvex-hull";

  std::vector<int> orders(static_cast<std::size_t>(G.Z().factor_count()),
                          grid_order);
  region.grid = G.Z().grid_points(orders);
  region.indicator.assign(region.grid.size(), false);

  std::vector<char> ind(region.grid.size(), 0);
  parallel_for(region.grid.size(), [&](std::size_t gi) {
    ind[gi] = G.a_cap_p_exact(i, region.grid[gi]).is_empty ? 0 : 1;
  });
  for (std::size_t gi = 0; gi < region.grid.size(); ++gi) {
    region.indicator[gi] = ind[gi] != 0;
    if (region.indicator[gi]) ++region.nonempty_count;
    if (region.indicator[gi] != G.declared_wi_contains(i, region.grid[gi]))
      region.boundary_flags.push_back(gi);
  }
  return region;
}

Correspondence build_product_map(
    const QuasiGame& G,
    const std::vector<std::optional<SelectionFunction>>& f) {
  require(static_cast<int>(f.size()) == G.agent_count(),
          ErrorCode::invalid_argument, "one selection slot per agent");
  const int N = G.agent_count();
  for (int i = 0; i < N; ++i) {
    if (G.agent(i).wi.kind != WiStructure::Kind::empty) {
      require(f[static_cast<std::size_t>(i)].has_value(),
              ErrorCode::invalid_argument,
              "selection undefined on the declared W of agent " +
                  std::to_string(i));
    }
  }
  std::vector<PolytopeSet> xpolys;
  for (int i = 0; i < N; ++i)
    xpolys.push_back(PolytopeSet(G.agent(i).strategy.vertices()));
  PolytopeSet Zpoly = product([&] {
    std::vector<PolytopeSet> both = xpolys;
    both.insert(both.end(), xpolys.begin(), xpolys.end());
    return both;
  }());

  // Copy what the evaluator needs; it must stay pure.
  auto eval = [&G, f, xpolys, N](const Vec& z) -> PolytopeSet {
    std::vector<PolytopeSet> parts;
    parts.reserve(static_cast<std::size_t>(2 * N));
    for (int i = 0; i < N; ++i) {
      if (G.declared_wi_contains(i, z)) {
        parts.push_back(
            PolytopeSet::point((*f[static_cast<std::size_t>(i)])(z)));
      } else {
        parts.push_back(xpolys[static_cast<std::size_t>(i)]);
      }
    }
    for (int j = 0; j < N; ++j) parts.push_back(G.agent(j).B.evaluate(z));
    return product(parts);
  };
  return Correspondence(G.Z(), Zpoly, eval, "product-map");
}

namespace {

// Per-factor defect of z against the product map, avoiding the product
// polytope in the hot loop: max over factors of the factor distance.
double product_defect(const QuasiGame& G,
                      const std::vector<std::optional<SelectionFunction>>& f,
                      const Vec& z) {
  const int N = G.agent_count();
  double d = 0.0;
  for (int i = 0; i < N; ++i) {
    if (G.declared_wi_contains(i, z)) {
      Vec fi = (*f[static_cast<std::size_t>(i)])(z);
      d = std::max(d, (G.x_part(z, i) - fi).norm());
    }
  }
  for (int j = 0; j < N; ++j) {
    PolytopeSet b = G.agent(j).B.evaluate(z);
    if (b.empty()) return std::numeric_limits<double>::infinity();
    d = std::max(d, b.distance_to(G.y_part(z, j)));
  }
  return d;
}

// Pattern descent over the stacked per-factor barycentric coordinates.
Vec product_pattern_minimize(const ProductDomain& Z, const Vec& z0,
                             const std::function<double(const Vec&)>& obj,
                             double target, double floor_step) {
  std::vector<Vec> lams;
  for (int fidx = 0; fidx < Z.factor_count(); ++fidx) {
    lams.push_back(
        Z.factors()[static_cast<std::size_t>(fidx)]
            .coordinates(Z.factor_slice(z0, fidx), 1e-7)
            .lambda);
  }
  auto point_of = [&](const std::vector<Vec>& ls) {
    std::vector<Vec> parts;
    for (int fidx = 0; fidx < Z.factor_count(); ++fidx)
      parts.push_back(
          Z.factors()[static_cast<std::size_t>(fidx)].point_at(ls[static_cast<std::size_t>(fidx)]));
    return Z.assemble(parts);
  };
  double cur = obj(point_of(lams));
  double step = 0.25;
  while (step > floor_step && cur > target) {
    bool improved = false;
    for (int fidx = 0; fidx < Z.factor_count(); ++fidx) {
      Vec& lam = lams[static_cast<std::size_t>(fidx)];
      const int n = static_cast<int>(lam.size());
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i == j || lam[j] < step) continue;
          Vec saved = lam;
          lam[i] += step;
          lam[j] -= step;
          double v = obj(point_of(lams));
          if (v < cur) {
            cur = v;
            improved = true;
          } else {
            lam = saved;
          }
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return point_of(lams);
}

std::string agent_tag(const QuasiGame& G, int i) {
  const auto& name = G.agent(i).name;
  return name.empty() ? "agent" + std::to_string(i) : name;
}

} // namespace

PropertyReport check_conditions(const QuasiGame& G, GameVariant variant,
                                int grid_order, const EqConfig& cfg) {
  PropertyReport rep;
  rep.property = variant == GameVariant::thm11 ? "conditions-thm11"
                                               : "conditions-thm12";
  rep.grid = "Z lattice order " + std::to_string(grid_order);
  if (variant == GameVariant::thm12)
    rep.notes.push_back(
        "condition (5) membership tested against hull values (co implicit)");

  std::vector<int> orders(static_cast<std::size_t>(G.Z().factor_count()),
                          grid_order);
  auto grid = G.Z().grid_points(orders);

  // Strides identify lattice neighbors inside the flattened product grid.
  std::vector<std::size_t> sizes, strides(static_cast<std::size_t>(G.Z().factor_count()), 1);
  for (int fidx = 0; fidx < G.Z().factor_count(); ++fidx) {
    const auto& K = G.Z().factors()[static_cast<std::size_t>(fidx)];
    sizes.push_back(simplex_lattice(K.vertex_count(), grid_order).size());
  }
  for (int fidx = G.Z().factor_count() - 2; fidx >= 0; --fidx)
    strides[static_cast<std::size_t>(fidx)] =
        strides[static_cast<std::size_t>(fidx + 1)] * sizes[static_cast<std::size_t>(fidx + 1)];

  for (int i = 0; i < G.agent_count(); ++i) {
    const auto& agent = G.agent(i);
    const std::string tag = agent_tag(G, i);
    RegionWi region = compute_wi(G, i, grid_order);
    if (!region.boundary_flags.empty()) {
      rep.notes.push_back(tag + ": " +
                          std::to_string(region.boundary_flags.size()) +
                          " grid cells disagree with the declared W structure");
    }

    std::vector<PolytopeSet> bvals(grid.size());
    parallel_for(grid.size(), [&](std::size_t gi) {
      bvals[gi] = agent.B.evaluate(grid[gi]);
    });

    double usc_worst = 0.0;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      const Vec& z = grid[gi];
      rep.combinations_tested += 1;
      const PolytopeSet& b = bvals[gi];
      if (b.empty()) {
        rep.violations.push_back(
            {z, std::numeric_limits<double>::infinity(), tag + ": B empty"});
        continue;
      }
      PolytopeSet a = agent.A.evaluate(z);
      if (!a.empty()) {
        for (const auto& v : a.vertices()) {
          double d = b.distance_to(v);
          if (d > cfg.tol)
            rep.violations.push_back({z, d, tag + ": A not within B"});
        }
      }
      // usc surrogate: neighbor values must not stick out of B(z).
      for (std::size_t s : strides) {
        std::size_t gj = gi + s;
        if (gj >= grid.size()) continue;
        if ((grid[gj] - z).lpNorm<Eigen::Infinity>() >
            2.0 * G.Z().diameter() / grid_order)
          continue;
        if (bvals[gj].empty()) continue;
        for (const auto& v : bvals[gj].vertices()) {
          double d = b.distance_to(v);
          usc_worst = std::max(usc_worst, d);
          if (d > cfg.usc_tol)
            rep.violations.push_back({z, d, tag + ": usc surrogate jump"});
        }
      }
      // Condition (5) on the exact W indicator.
      if (region.indicator[gi]) {
        PolytopeSet p = agent.P.evaluate(z);
        if (!p.empty()) {
          Vec xi = G.x_part(z, i);
          double d = p.distance_to(xi);
          if (d <= cfg.tol)
            rep.violations.push_back({z, d, tag + ": condition (5): x_i in P_i"});
        }
      }
    }
    rep.stats[tag + ".usc_max_jump"] = usc_worst;
    rep.stats[tag + ".W_cells"] = static_cast<double>(region.nonempty_count);
  }
  rep.sort_violations();
  return rep;
}

namespace {

// Inward-pulled restriction of (A_i ∩ P_i) used to validate selection
// witnesses on cl W_i: values at the simplex boundary are read slightly
// inside, where the region is nonempty.
Correspondence pulled_restriction(const QuasiGame& G, int i,
                                  const SimplexDomain& W, double pull) {
  Vec center = W.centroid();
  PolytopeSet Xi(G.agent(i).strategy.vertices());
  auto eval = [&G, i, center, pull](const Vec& z) -> PolytopeSet {
    Vec zp = (1.0 - pull) * z + pull * center;
    return G.a_cap_p(i, zp);
  };
  return Correspondence(G.Z(), Xi, eval,
                        "pulled-A-cap-P:" + std::to_string(i));
}

} // namespace

EquilibriumOutcome solve_equilibrium(const QuasiGame& G, const EqConfig& cfg) {
  EquilibriumOutcome out;
  out.conditions = check_conditions(G, cfg.variant, cfg.grid_order, cfg);
  if (!out.conditions.pass()) {
    out.kind = EquilibriumOutcome::Kind::scenario_fault;
    out.fault = "hypothesis diagnostics failed (" +
                std::to_string(out.conditions.violations.size()) +
                " violations; first: " +
                out.conditions.violations.front().context + ")";
    return out;
  }

  for (int i = 0; i < G.agent_count(); ++i)
    out.regions.push_back(compute_wi(G, i, cfg.grid_order));

  // Selections of A_i ∩ P_i on the declared cl W_i structures.
  std::vector<std::optional<SelectionFunction>> selections(
      static_cast<std::size_t>(G.agent_count()));
  for (int i = 0; i < G.agent_count(); ++i) {
    const auto& agent = G.agent(i);
    if (agent.wi.kind == WiStructure::Kind::empty) continue;
    if (agent.wi.kind == WiStructure::Kind::simplex) {
      SimplexDomain W(agent.wi.generators);
      Correspondence Ts = pulled_restriction(G, i, W, cfg.pullback);
      WnqWitness w;
      if (agent.selection_witness) {
        w = *agent.selection_witness;
        PropertyReport rep =
            check_wnq(Ts, w, cfg.selection_mesh, cfg.selection_tol);
        if (!rep.pass()) {
          out.kind = EquilibriumOutcome::Kind::scenario_fault;
          out.fault = agent_tag(G, i) +
                      ": supplied selection witness fails on cl W (" +
                      std::to_string(rep.violations.size()) + " violations)";
          return out;
        }
      } else {
        auto found = search_witness(Ts, StarBase::wnq, agent.wi.generators, 2,
                                    3, cfg.selection_mesh, cfg.selection_tol);
        if (!found.witness) {
          out.kind = EquilibriumOutcome::Kind::scenario_fault;
          out.fault = agent_tag(G, i) +
                      ": no selection witness found on cl W (" +
                      std::to_string(found.candidates_tested) + " candidates)";
          return out;
        }
        w = *found.witness;
      }
      selections[static_cast<std::size_t>(i)] = build_wnq_selection(W, w);
    } else {
      require(agent.biconvex_witness.has_value(), ErrorCode::missing_witness,
              agent_tag(G, i) + ": biconvex W structure needs a witness");
      const auto& bw = *agent.biconvex_witness;
      const SimplexDomain& F = G.agent(0).strategy;
      std::vector<ProductPoint> pairs;
      for (const auto& g : agent.wi.generators) {
        ProductPoint p;
        p.x = g.head(F.ambient_dim());
        p.y = g.tail(F.ambient_dim());
        pairs.push_back(std::move(p));
      }
      selections[static_cast<std::size_t>(i)] =
          build_biconvex_selection(pairs, bw, G.wi_hull(i));
    }
  }

  Correspondence Phi = build_product_map(G, selections);

  auto defect = [&](const Vec& z) { return product_defect(G, selections, z); };
  std::vector<int> orders(static_cast<std::size_t>(G.Z().factor_count()),
                          cfg.grid_order);
  auto grid = G.Z().grid_points(orders);
  std::vector<double> vals(grid.size());
  parallel_for(grid.size(), [&](std::size_t gi) { vals[gi] = defect(grid[gi]); });
  std::size_t best = 0;
  for (std::size_t gi = 1; gi < grid.size(); ++gi) {
    if (vals[gi] < vals[best] ||
        (vals[gi] == vals[best] && lex_less(grid[gi], grid[best])))
      best = gi;
  }
  Vec zstar = grid[best];
  double dstar = vals[best];
  if (dstar > cfg.eps) {
    Vec refined = product_pattern_minimize(G.Z(), zstar, defect,
                                           std::min(cfg.eps, 1e-10), 1e-14);
    double dr = defect(refined);
    if (dr < dstar) {
      zstar = refined;
      dstar = dr;
    }
  }
  if (dstar > cfg.eps) {
    out.kind = EquilibriumOutcome::Kind::inconclusive;
    out.best_point = zstar;
    out.best_defect = dstar;
    out.fault = "no point met the fixed-point defect bound at the mesh cap";
    return out;
  }

  // Dichotomy: a fixed point inside some declared W_i realizes
  // x_i in (A_i ∩ P_i)(z) subset of P_i(z), contradicting condition (5).
  for (int i = 0; i < G.agent_count(); ++i) {
    if (!G.declared_wi_contains(i, zstar)) continue;
    out.kind = EquilibriumOutcome::Kind::scenario_fault;
    PolytopeSet cap = G.a_cap_p(i, zstar);
    double d = cap.empty() ? std::numeric_limits<double>::infinity()
                           : cap.distance_to(G.x_part(zstar, i));
    out.fault = agent_tag(G, i) +
                ": fixed point landed in W (x_i within " + fmt_double(d) +
                " of (A∩P)(z*)); scenario contradicts condition (5)";
    out.best_point = zstar;
    out.best_defect = dstar;
    return out;
  }

  EquilibriumCertificate cert;
  const int N = G.agent_count();
  cert.x = Vec(G.X().ambient_dim());
  cert.y = Vec(G.X().ambient_dim());
  for (int i = 0; i < N; ++i) {
    cert.x.segment(G.X().factor_offset(i),
                   G.agent(i).strategy.ambient_dim()) = G.x_part(zstar, i);
    cert.y.segment(G.X().factor_offset(i),
                   G.agent(i).strategy.ambient_dim()) = G.y_part(zstar, i);
  }
  for (int i = 0; i < N; ++i) {
    PolytopeSet b = G.agent(i).B.evaluate(zstar);
    cert.closure_residuals.push_back(
        b.empty() ? std::numeric_limits<double>::infinity()
                  : b.distance_to(G.y_part(zstar, i)));
    auto e = G.a_cap_p_exact(i, zstar);
    if (!e.is_empty) {
      out.kind = EquilibriumOutcome::Kind::scenario_fault;
      out.fault = agent_tag(G, i) +
                  ": W declaration inconsistent at the fixed point "
                  "((A∩P)(z*) is nonempty outside declared W)";
      out.best_point = zstar;
      out.best_defect = dstar;
      return out;
    }
    cert.emptiness_tokens.push_back(e.token);
  }
  cert.eps = cfg.eps;
  cert.eta = cfg.eta;
  {
    PolytopeSet phi = Phi.evaluate(zstar);
    cert.defect = phi.distance_to(zstar);
  }

  out.verification = verify_equilibrium(G, cert.x, cert.y, cfg.eta);
  if (!out.verification.pass()) {
    out.kind = EquilibriumOutcome::Kind::inconclusive;
    out.fault = "certificate failed its own verification round-trip";
    out.best_point = zstar;
    out.best_defect = dstar;
    return out;
  }
  out.kind = EquilibriumOutcome::Kind::certificate;
  out.certificate = std::move(cert);
  out.best_point = zstar;
  out.best_defect = dstar;
  return out;
}

PropertyReport verify_equilibrium(const QuasiGame& G, const Vec& x,
                                  const Vec& y, double eta) {
  PropertyReport rep;
  rep.property = "equilibrium-verification";
  rep.grid = "pointwise at the certificate point, eta=" + fmt_double(eta);
  Vec z(x.size() + y.size());
  z.head(x.size()) = x;
  z.tail(y.size()) = y;
  for (int i = 0; i < G.agent_count(); ++i) {
    const std::string tag = agent_tag(G, i);
    rep.combinations_tested += 2;
    PolytopeSet b = G.agent(i).B.evaluate(z);
    double d = b.empty() ? std::numeric_limits<double>::infinity()
                         : b.distance_to(G.y_part(z, i));
    rep.stats[tag + ".closure_residual"] = d;
    if (d > eta)
      rep.violations.push_back({z, d, tag + ": y_i not within eta of cl B_i"});
    auto e = G.a_cap_p_exact(i, z);
    rep.notes.push_back(tag + " emptiness token: " + e.token);
    if (!e.is_empty) {
      rep.violations.push_back(
          {z, 0.0, tag + ": (A∩P)(x*,y*) is nonempty (exact)"});
    }
  }
  rep.sort_violations();
  return rep;
}

} // namespace corrfix
