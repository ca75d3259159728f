#include "corrfix/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace corrfix {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) {
  throw Error(ErrorCode::invalid_scenario, "scenario: " + msg);
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string verdict_of(const PropertyReport& rep) {
  return rep.pass() ? "PASS" : "FAIL";
}

void attach_report(OpRecord& rec, const PropertyReport& rep) {
  rec.fields.emplace_back("property", rep.property);
  rec.fields.emplace_back("grid", rep.grid);
  rec.fields.emplace_back("combinations", std::to_string(rep.combinations_tested));
  for (const auto& [k, v] : rep.stats) rec.fields.emplace_back(k, fmt_double(v));
  rec.fields.emplace_back("violations", std::to_string(rep.violations.size()));
  for (const auto& v : rep.violations) {
    rec.violations.push_back(fmt_vec(v.location) + " dist=" + fmt_double(v.distance) +
                             (v.context.empty() ? "" : " [" + v.context + "]"));
  }
  for (const auto& n : rep.notes) rec.notes.push_back(n);
}

struct EffectiveConfig {
  RunConfig cfg;
};

int op_mesh(const json& j, const Overrides& ov, const RunConfig& cfg) {
  if (ov.mesh) return *ov.mesh;
  return j.value("mesh", cfg.mesh);
}
double op_tol(const json& j, const Overrides& ov, const RunConfig& cfg) {
  if (ov.tol) return *ov.tol;
  return j.value("tol", cfg.tol);
}
double op_eps(const json& j, const Overrides& ov, const RunConfig& cfg) {
  if (ov.eps) return *ov.eps;
  return j.value("eps", cfg.eps);
}
double op_eta(const json& j, const Overrides& ov, const RunConfig& cfg) {
  if (ov.eta) return *ov.eta;
  return j.value("eta", cfg.eta);
}

std::vector<double> radii_of(const json& j) {
  std::vector<double> radii;
  if (j.contains("radii")) {
    for (const auto& r : j.at("radii")) radii.push_back(r.get<double>());
  } else {
    int count = j.value("radii_pow2", 10);
    for (int k = 1; k <= count; ++k) radii.push_back(std::pow(2.0, -k));
  }
  return radii;
}

void run_check(const Scenario& sc, const Overrides& ov, RunReport& out) {
  if (!sc.raw.contains("checks")) bad("no 'checks' block for the check command");
  for (const auto& j : sc.raw.at("checks")) {
    OpRecord rec;
    rec.name = j.value("name", "check");
    std::string op = j.at("op").get<std::string>();
    const int mesh = op_mesh(j, ov, sc.config);
    const double tol = op_tol(j, ov, sc.config);
    try {
      if (op == "wcg") {
        const auto& w = sc.wnq_witness(j.at("witness").get<std::string>());
        auto rep = check_wcg(sc.correspondence(j.at("correspondence").get<std::string>()),
                             WcgWitness{w.points, w.values}, mesh, tol);
        rec.verdict = verdict_of(rep);
        attach_report(rec, rep);
      } else if (op == "wnq") {
        auto rep = check_wnq(sc.correspondence(j.at("correspondence").get<std::string>()),
                             sc.wnq_witness(j.at("witness").get<std::string>()),
                             mesh, tol);
        rec.verdict = verdict_of(rep);
        attach_report(rec, rep);
      } else if (op == "biconvex") {
        const auto& w = sc.biconvex_witness(j.at("witness").get<std::string>());
        std::optional<BiconvexGridSet> B;
        if (j.contains("B_hull")) {
          const auto& bj = j.at("B_hull");
          std::vector<ProductPoint> gens;
          for (const auto& gj : bj.at("generators")) {
            Vec s(gj.size());
            for (std::size_t i = 0; i < gj.size(); ++i) s[static_cast<Eigen::Index>(i)] = gj[i].get<double>();
            ProductPoint p;
            p.x = s.head(w.x_dim);
            p.y = s.tail(s.size() - w.x_dim);
            gens.push_back(std::move(p));
          }
          B = biconvex_hull(gens, sc.simplex(bj.at("factor_x").get<std::string>()),
                            sc.simplex(bj.at("factor_y").get<std::string>()),
                            bj.value("order", 32), bj.value("order", 32));
        }
        auto rep = check_weakly_biconvex(
            sc.correspondence(j.at("correspondence").get<std::string>()),
            B ? &*B : nullptr, w, mesh, tol);
        rec.verdict = verdict_of(rep);
        attach_report(rec, rep);
      } else if (op == "star") {
        std::string base = j.value("base", "wcg");
        std::vector<double> radii = radii_of(j);
        std::vector<WnqWitness> ws;
        for (const auto& wn : j.at("witnesses"))
          ws.push_back(sc.wnq_witness(wn.get<std::string>()));
        auto rep = check_star_variant(
            sc.correspondence(j.at("correspondence").get<std::string>()),
            base == "wnq" ? StarBase::wnq : StarBase::wcg, radii, ws, mesh, tol);
        rec.verdict = verdict_of(rep);
        attach_report(rec, rep);
      } else if (op == "search") {
        auto res = search_witness(
            sc.correspondence(j.at("correspondence").get<std::string>()),
            j.value("property", "wnq") == std::string("wcg") ? StarBase::wcg
                                                             : StarBase::wnq,
            [&] {
              std::vector<Vec> pts;
              for (const auto& pj : j.at("points")) {
                Vec v(pj.size());
                for (std::size_t i = 0; i < pj.size(); ++i)
                  v[static_cast<Eigen::Index>(i)] = pj[i].get<double>();
                pts.push_back(v);
              }
              return pts;
            }(),
            j.value("density", 2), j.value("g_family", 3), mesh, tol);
        rec.verdict = res.witness ? "FOUND" : "NONE";
        rec.fields.emplace_back("candidates_tested",
                                std::to_string(res.candidates_tested));
        if (res.witness) {
          for (std::size_t i = 0; i < res.witness->values.size(); ++i)
            rec.fields.emplace_back("value" + std::to_string(i),
                                    fmt_vec(res.witness->values[i]));
          rec.fields.emplace_back(
              "g", res.witness->identity_g() ? "identity" : "nonlinear");
        }
      } else {
        bad("unknown check op '" + op + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::witness_invalid ||
          e.code() == ErrorCode::witness_normalization ||
          e.code() == ErrorCode::witness_misaligned) {
        rec.verdict = "FAULT";
        rec.fields.emplace_back("fault", e.what());
      } else {
        throw;
      }
    }
    out.ops.push_back(std::move(rec));
  }
}

void run_select(const Scenario& sc, const Overrides& ov, RunReport& out) {
  if (!sc.raw.contains("selections")) bad("no 'selections' block for the select command");
  for (const auto& j : sc.raw.at("selections")) {
    OpRecord rec;
    rec.name = j.value("name", "selection");
    const int mesh = op_mesh(j, ov, sc.config);
    const double tol = op_tol(j, ov, sc.config);
    std::string kind = j.value("kind", "wnq");
    try {
      if (kind == "wnq") {
        const auto& K = sc.simplex(j.at("simplex").get<std::string>());
        const auto& w = sc.wnq_witness(j.at("witness").get<std::string>());
        SelectionFunction f = build_wnq_selection(K, w);
        auto rep = verify_selection(
            f, sc.correspondence(j.at("verify_against").get<std::string>()),
            mesh, tol);
        double exactness = 0.0;
        for (int i = 0; i < K.vertex_count(); ++i) {
          exactness = std::max(
              exactness,
              (f(K.vertex(i)) - w.values[static_cast<std::size_t>(i)])
                  .lpNorm<Eigen::Infinity>());
        }
        rec.fields.emplace_back("vertex_exactness", fmt_double(exactness));
        bool exact_ok = exactness <= 1e-12;
        rec.verdict = (rep.pass() && exact_ok) ? "PASS" : "FAIL";
        attach_report(rec, rep);
        if (!exact_ok) rec.notes.push_back("vertex exactness above 1e-12");
      } else if (kind == "biconvex") {
        const auto& w = sc.biconvex_witness(j.at("witness").get<std::string>());
        std::vector<ProductPoint> pairs;
        for (const auto& s : w.pairs) {
          ProductPoint p;
          p.x = s.head(w.x_dim);
          p.y = s.tail(s.size() - w.x_dim);
          pairs.push_back(std::move(p));
        }
        std::shared_ptr<const BiconvexGridSet> gate;
        if (j.contains("hull_order")) {
          gate = std::make_shared<const BiconvexGridSet>(biconvex_hull(
              pairs, sc.simplex(j.at("factor_x").get<std::string>()),
              sc.simplex(j.at("factor_y").get<std::string>()),
              j.at("hull_order").get<int>(), j.at("hull_order").get<int>()));
        }
        SelectionFunction f = build_biconvex_selection(pairs, w, gate);
        auto rep = verify_selection(
            f, sc.correspondence(j.at("verify_against").get<std::string>()),
            mesh, tol);
        rec.verdict = verdict_of(rep);
        attach_report(rec, rep);
      } else {
        bad("unknown selection kind '" + kind + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::witness_invalid ||
          e.code() == ErrorCode::witness_normalization ||
          e.code() == ErrorCode::witness_misaligned ||
          e.code() == ErrorCode::affinely_dependent) {
        rec.verdict = "FAULT";
        rec.fields.emplace_back("fault", e.what());
      } else {
        throw;
      }
    }
    out.ops.push_back(std::move(rec));
  }
}

WitnessProvider provider_from(const Scenario& sc, const json& j) {
  if (!j.contains("witnesses")) return nullptr;
  struct Entry {
    double radius;
    WnqWitness witness;
  };
  std::vector<Entry> entries;
  for (const auto& ej : j.at("witnesses")) {
    entries.push_back({ej.at("radius").get<double>(),
                       sc.wnq_witness(ej.at("witness").get<std::string>())});
  }
  bool required = j.value("witness_mode", "optional") == std::string("required");
  return [entries, required](double r) -> std::optional<WnqWitness> {
    for (const auto& e : entries) {
      if (std::abs(e.radius - r) <= 1e-12) return e.witness;
    }
    if (required)
      throw Error(ErrorCode::missing_witness,
                  "no witness supplied for radius " + fmt_double(r));
    return std::nullopt;
  };
}

void attach_fixed_point(OpRecord& rec, const FixedPointResult& res) {
  rec.fields.emplace_back("x_star", fmt_vec(res.x_star));
  rec.fields.emplace_back("residual", fmt_double(res.residual));
  rec.fields.emplace_back("mesh_order", std::to_string(res.mesh_order));
  rec.fields.emplace_back("cells_visited", std::to_string(res.cells_visited));
  if (res.membership_defect >= 0)
    rec.fields.emplace_back("membership_defect", fmt_double(res.membership_defect));
  if (!res.note.empty()) rec.notes.push_back(res.note);
}

void attach_trace(OpRecord& rec, const ApproxNetTrace& trace) {
  rec.fields.emplace_back("steps", std::to_string(trace.steps.size()));
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& s = trace.steps[k];
    rec.fields.emplace_back(
        "step" + std::to_string(k),
        "r=" + fmt_double(s.radius) + " x=" + fmt_vec(s.x) +
            " defect=" + fmt_double(s.defect) +
            (s.witness_route ? " route=witness" : " route=defect"));
  }
  rec.fields.emplace_back("cluster", fmt_vec(trace.cluster));
  rec.fields.emplace_back("cluster_diameter", fmt_double(trace.cluster_diameter));
  rec.fields.emplace_back("closure_certificate",
                          trace.closure_certificate ? "true" : "false");
  rec.fields.emplace_back("eta", fmt_double(trace.eta));
  rec.fields.emplace_back("closure_mesh", fmt_double(trace.closure_mesh));
  if (!trace.note.empty()) rec.notes.push_back(trace.note);
}

void run_fixpoint(const Scenario& sc, const Overrides& ov, RunReport& out) {
  if (!sc.raw.contains("fixpoints")) bad("no 'fixpoints' block for the fixpoint command");
  for (const auto& j : sc.raw.at("fixpoints")) {
    OpRecord rec;
    rec.name = j.value("name", "fixpoint");
    std::string op = j.at("op").get<std::string>();
    const double eps = op_eps(j, ov, sc.config);
    const double eta = op_eta(j, ov, sc.config);
    const int mesh = op_mesh(j, ov, sc.config);
    const double tol = op_tol(j, ov, sc.config);
    try {
      if (op == "brouwer") {
        const auto& K = sc.simplex(j.at("simplex").get<std::string>());
        const auto& w = sc.wnq_witness(j.at("witness").get<std::string>());
        SelectionFunction f = build_wnq_selection(K, w);
        auto res = brouwer_fixed_point(f, K, eps, j.value("mesh_cap", 64));
        rec.verdict = res.converged ? "PASS" : "INCONCLUSIVE";
        attach_fixed_point(rec, res);
      } else if (op == "wnq") {
        const auto& K = sc.simplex(j.at("simplex").get<std::string>());
        auto res = solve_wnq_fixed_point(
            sc.correspondence(j.at("correspondence").get<std::string>()),
            sc.wnq_witness(j.at("witness").get<std::string>()), K, eps, mesh,
            tol, j.value("mesh_cap", 64));
        rec.verdict = res.converged ? "PASS" : "INCONCLUSIVE";
        attach_fixed_point(rec, res);
      } else if (op == "net") {
        const auto& K = sc.simplex(j.at("simplex").get<std::string>());
        NetConfig cfg;
        cfg.grid_order = j.value("grid", 64);
        cfg.check_mesh = mesh;
        cfg.tol = tol;
        cfg.closure_mesh = j.value("closure_mesh", 0.01);
        auto trace = approx_fixed_point_net(
            sc.correspondence(j.at("correspondence").get<std::string>()),
            radii_of(j), provider_from(sc, j), K, eps, eta, cfg);
        rec.verdict = trace.verdict == ApproxNetTrace::Verdict::pass ? "PASS"
                      : trace.verdict == ApproxNetTrace::Verdict::inconclusive
                          ? "INCONCLUSIVE"
                          : "FAIL";
        attach_trace(rec, trace);
      } else if (op == "corollary") {
        const auto& K = sc.simplex(j.at("simplex").get<std::string>());
        NetConfig cfg;
        cfg.grid_order = j.value("grid", 64);
        cfg.check_mesh = mesh;
        cfg.tol = tol;
        cfg.closure_mesh = j.value("closure_mesh", 0.01);
        auto res = solve_corollary_pair(
            sc.correspondence(j.at("S").get<std::string>()),
            sc.correspondence(j.at("T").get<std::string>()), K,
            j.value("grid", 32), eps, eta, provider_from(sc, j), cfg);
        if (!res.containment.pass()) {
          rec.verdict = "FAIL";
          rec.notes.push_back("containment precondition violated");
          attach_report(rec, res.containment);
        } else {
          rec.verdict = res.fixed_point->converged ? "PASS" : "INCONCLUSIVE";
          attach_report(rec, res.containment);
          attach_fixed_point(rec, *res.fixed_point);
          attach_trace(rec, *res.trace);
        }
      } else {
        bad("unknown fixpoint op '" + op + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::witness_invalid ||
          e.code() == ErrorCode::witness_normalization ||
          e.code() == ErrorCode::witness_misaligned ||
          e.code() == ErrorCode::missing_witness) {
        rec.verdict = "FAULT";
        rec.fields.emplace_back("fault", e.what());
      } else {
        throw;
      }
    }
    out.ops.push_back(std::move(rec));
  }
}

std::vector<ProductPoint> parse_product_points(const json& j, int x_dim) {
  std::vector<ProductPoint> pts;
  for (const auto& pj : j) {
    Vec s(pj.size());
    for (std::size_t i = 0; i < pj.size(); ++i)
      s[static_cast<Eigen::Index>(i)] = pj[i].get<double>();
    ProductPoint p;
    p.x = s.head(x_dim);
    p.y = s.tail(s.size() - x_dim);
    pts.push_back(std::move(p));
  }
  return pts;
}

void run_hull(const Scenario& sc, const Overrides& ov, RunReport& out) {
  if (!sc.raw.contains("hulls")) bad("no 'hulls' block for the hull command");
  std::uint64_t seed = ov.seed ? *ov.seed : sc.config.seed;
  for (const auto& j : sc.raw.at("hulls")) {
    OpRecord rec;
    rec.name = j.value("name", "hull");
    std::string op = j.at("op").get<std::string>();
    const auto& X = sc.simplex(j.at("factor_x").get<std::string>());
    const auto& Y = sc.simplex(j.at("factor_y").get<std::string>());
    const int order = ov.mesh ? *ov.mesh : j.value("order", 64);
    const double tol = op_tol(j, ov, sc.config);
    if (op == "hull") {
      auto pts = parse_product_points(j.at("points"), X.ambient_dim());
      BiconvexGridSet H = biconvex_hull(pts, X, Y, order, order);
      bool bc = is_biconvex_set(H);
      bool idem = biconvex_hull(H) == H;
      rec.verdict = (bc && idem) ? "PASS" : "FAIL";
      rec.fields.emplace_back("order", std::to_string(order));
      rec.fields.emplace_back("cells", std::to_string(H.count()));
      rec.fields.emplace_back("is_biconvex", bc ? "true" : "false");
      rec.fields.emplace_back("idempotent", idem ? "true" : "false");
      auto rows = H.rle_rows();
      rec.fields.emplace_back("rows", std::to_string(rows.size()));
      for (const auto& r : rows) rec.fields.emplace_back("row", r);
    } else if (op == "subset_convex") {
      PropertyReport merged;
      merged.property = "hull-subset-convex";
      int sets = 0;
      if (j.contains("points")) {
        auto pts = parse_product_points(j.at("points"), X.ambient_dim());
        merged = hull_subset_convex(pts, X, Y, order, order, tol);
        sets = 1;
      } else {
        const int nsets = j.value("sets", 20);
        const int npts = j.value("points_per_set", 5);
        std::mt19937_64 gen(j.value("seed", seed));
        for (int s = 0; s < nsets; ++s) {
          std::vector<ProductPoint> pts;
          for (int p = 0; p < npts; ++p) {
            ProductPoint pp;
            // Random barycentric coordinates per factor.
            auto sample = [&](const SimplexDomain& F) {
              Vec lam(F.vertex_count());
              double sum = 0;
              for (Eigen::Index i = 0; i < lam.size(); ++i) {
                lam[i] = -std::log(1.0 - rng_uniform(gen));
                sum += lam[i];
              }
              lam /= sum;
              return F.point_at(lam);
            };
            pp.x = sample(X);
            pp.y = sample(Y);
            pts.push_back(std::move(pp));
          }
          auto rep = hull_subset_convex(pts, X, Y, order, order, tol);
          merged.merge_tagged(rep, "set" + std::to_string(s));
          ++sets;
        }
        merged.grid = "product lattice " + std::to_string(order) + "x" +
                      std::to_string(order) + ", seeded random sets";
      }
      rec.verdict = verdict_of(merged);
      rec.fields.emplace_back("sets", std::to_string(sets));
      merged.sort_violations();
      attach_report(rec, merged);
    } else {
      bad("unknown hull op '" + op + "'");
    }
    out.ops.push_back(std::move(rec));
  }
}

void run_equilibrium(const Scenario& sc, const Overrides& ov, RunReport& out) {
  if (!sc.raw.contains("equilibrium")) bad("no 'equilibrium' block");
  const auto& j = sc.raw.at("equilibrium");
  OpRecord rec;
  rec.name = j.value("name", "equilibrium");
  QuasiGame game = build_game(sc);
  EqConfig cfg;
  cfg.variant = game_variant(sc);
  cfg.grid_order = ov.mesh ? *ov.mesh : j.value("grid", 8);
  cfg.eps = ov.eps ? *ov.eps : j.value("eps", sc.config.eps);
  cfg.eta = ov.eta ? *ov.eta : j.value("eta", 1e-3);
  cfg.tol = ov.tol ? *ov.tol : j.value("tol", sc.config.tol);
  cfg.usc_tol = j.value("usc_tol", cfg.usc_tol);
  cfg.pullback = j.value("pullback", cfg.pullback);
  cfg.selection_mesh = j.value("selection_mesh", cfg.selection_mesh);
  cfg.selection_tol = j.value("selection_tol", cfg.selection_tol);

  EquilibriumOutcome res = solve_equilibrium(game, cfg);
  for (const auto& region : res.regions) {
    rec.fields.emplace_back(
        "W" + std::to_string(region.agent),
        region.structure + " cells=" + std::to_string(region.nonempty_count) +
            " flagged=" + std::to_string(region.boundary_flags.size()));
  }
  switch (res.kind) {
    case EquilibriumOutcome::Kind::certificate: {
      rec.verdict = "CERTIFICATE";
      const auto& c = *res.certificate;
      rec.fields.emplace_back("x_star", fmt_vec(c.x));
      rec.fields.emplace_back("y_star", fmt_vec(c.y));
      rec.fields.emplace_back("defect", fmt_double(c.defect));
      rec.fields.emplace_back("eps", fmt_double(c.eps));
      rec.fields.emplace_back("eta", fmt_double(c.eta));
      for (std::size_t i = 0; i < c.closure_residuals.size(); ++i) {
        rec.fields.emplace_back("closure_residual" + std::to_string(i),
                                fmt_double(c.closure_residuals[i]));
        rec.fields.emplace_back("emptiness_token" + std::to_string(i),
                                c.emptiness_tokens[i]);
      }
      rec.fields.emplace_back("verification",
                              res.verification.pass() ? "PASS" : "FAIL");
      break;
    }
    case EquilibriumOutcome::Kind::scenario_fault: {
      rec.verdict = "FAULT";
      rec.fields.emplace_back("fault", res.fault);
      for (const auto& v : res.conditions.violations) {
        rec.violations.push_back(fmt_vec(v.location) + " dist=" +
                                 fmt_double(v.distance) + " [" + v.context + "]");
      }
      break;
    }
    case EquilibriumOutcome::Kind::inconclusive: {
      rec.verdict = "INCONCLUSIVE";
      rec.fields.emplace_back("note", res.fault);
      rec.fields.emplace_back("best_point", fmt_vec(res.best_point));
      rec.fields.emplace_back("best_defect", fmt_double(res.best_defect));
      break;
    }
  }
  out.ops.push_back(std::move(rec));
}

int exit_code_of(const RunReport& r) {
  bool any_fail = false, any_inconclusive = false;
  for (const auto& op : r.ops) {
    if (op.verdict == "FAIL" || op.verdict == "FAULT") any_fail = true;
    if (op.verdict == "INCONCLUSIVE") any_inconclusive = true;
  }
  if (any_fail) return 1;
  if (any_inconclusive) return 3;
  return 0;
}

} // namespace

RunReport run_scenario(const std::string& path, const std::string& command,
                       const Overrides& ov) {
  auto t0 = std::chrono::steady_clock::now();
  Scenario sc = load_scenario(path);
  if (ov.mesh) sc.config.mesh = *ov.mesh;
  if (ov.tol) sc.config.tol = *ov.tol;
  if (ov.eps) sc.config.eps = *ov.eps;
  if (ov.eta) sc.config.eta = *ov.eta;
  if (ov.seed) sc.config.seed = *ov.seed;

  RunReport out;
  out.command = command;
  out.scenario_path = path;
  out.digest = sc.digest;
  out.config_echo.emplace_back("eps", fmt_double(sc.config.eps));
  out.config_echo.emplace_back("eta", fmt_double(sc.config.eta));
  out.config_echo.emplace_back("mesh", std::to_string(sc.config.mesh));
  out.config_echo.emplace_back("seed", std::to_string(sc.config.seed));
  out.config_echo.emplace_back("tol", fmt_double(sc.config.tol));

  if (command == "check") run_check(sc, ov, out);
  else if (command == "select") run_select(sc, ov, out);
  else if (command == "fixpoint") run_fixpoint(sc, ov, out);
  else if (command == "hull") run_hull(sc, ov, out);
  else if (command == "equilibrium") run_equilibrium(sc, ov, out);
  else bad("unknown command '" + command + "'");

  out.exit_code = exit_code_of(out);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::string emit_structured(const RunReport& r) {
  std::ostringstream os;
  os << "corrfix-report/1\n";
  os << "command: " << r.command << "\n";
  os << "scenario: " << r.scenario_path << "\n";
  os << "digest: " << hex16(r.digest) << "\n";
  os << "config:";
  for (const auto& [k, v] : r.config_echo) os << " " << k << "=" << v;
  os << "\n";
  os << "ops: " << r.ops.size() << "\n";
  for (const auto& op : r.ops) {
    os << "op: " << op.name << "\n";
    os << "verdict: " << op.verdict << "\n";
    for (const auto& [k, v] : op.fields) os << k << ": " << v << "\n";
    for (const auto& v : op.violations) os << "violation: " << v << "\n";
    for (const auto& n : op.notes) os << "note: " << n << "\n";
    os << "end-op\n";
  }
  os << "overall: "
     << (r.exit_code == 0 ? "PASS" : r.exit_code == 3 ? "INCONCLUSIVE" : "FAIL")
     << "\n";
  os << "exit: " << r.exit_code << "\n";
  return os.str();
}

std::string emit_human(const RunReport& r) {
  std::ostringstream os;
  os << "corrfix " << r.command << "  " << r.scenario_path << "  (digest "
     << hex16(r.digest) << ")\n";
  os << "config:";
  for (const auto& [k, v] : r.config_echo) os << " " << k << "=" << v;
  os << "\n\n";
  std::size_t width = 4;
  for (const auto& op : r.ops) width = std::max(width, op.name.size());
  for (const auto& op : r.ops) {
    os << "  " << op.name << std::string(width - op.name.size() + 2, ' ')
       << op.verdict << "\n";
    for (const auto& [k, v] : op.fields) {
      os << "      " << k << " = " << v << "\n";
    }
    for (const auto& v : op.violations) os << "      violation " << v << "\n";
    for (const auto& n : op.notes) os << "      note " << n << "\n";
  }
  os << "\noverall: "
     << (r.exit_code == 0 ? "PASS" : r.exit_code == 3 ? "INCONCLUSIVE" : "FAIL")
     << "  (exit " << r.exit_code << ", " << fmt_double(r.wall_seconds)
     << " s)\n";
  return os.str();
}

} // namespace corrfix
