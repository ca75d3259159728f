#include "corrfix/scenario.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace corrfix {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) {
  throw Error(ErrorCode::invalid_scenario, "scenario: " + msg);
}

Vec parse_vec(const json& j) {
  if (!j.is_array()) bad("expected a coordinate array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

std::vector<Vec> parse_vec_list(const json& j) {
  if (!j.is_array()) bad("expected an array of points");
  std::vector<Vec> out;
  for (const auto& e : j) out.push_back(parse_vec(e));
  return out;
}

Mat parse_mat(const json& j) {
  if (!j.is_array() || j.empty()) bad("expected a matrix (array of rows)");
  Mat m(j.size(), j[0].size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != j[0].size()) bad("ragged matrix");
    for (std::size_t c = 0; c < j[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
  }
  return m;
}

struct LinearConstraint {
  Vec coeffs;
  double rhs = 0.0;
  int op = 0; // 0:<= 1:< 2:>= 3:>
  bool holds(const Vec& x) const {
    double lhs = coeffs.dot(x);
    switch (op) {
      case 0: return lhs <= rhs;
      case 1: return lhs < rhs;
      case 2: return lhs >= rhs;
      default: return lhs > rhs;
    }
  }
};

LinearConstraint parse_constraint(const json& j) {
  LinearConstraint c;
  c.coeffs = parse_vec(j.at("coeffs"));
  c.rhs = j.at("rhs").get<double>();
  std::string op = j.value("op", "<=");
  if (op == "<=") c.op = 0;
  else if (op == "<") c.op = 1;
  else if (op == ">=") c.op = 2;
  else if (op == ">") c.op = 3;
  else bad("unknown constraint op '" + op + "'");
  return c;
}

struct AffineVertex {
  Mat M;
  Vec b;
};

std::vector<AffineVertex> parse_affine_vertices(const json& j) {
  std::vector<AffineVertex> out;
  for (const auto& e : j) {
    AffineVertex av;
    av.M = parse_mat(e.at("M"));
    av.b = parse_vec(e.at("b"));
    if (av.M.rows() != av.b.size()) bad("affine vertex M/b shape mismatch");
    out.push_back(std::move(av));
  }
  return out;
}

std::vector<Vec> eval_affine(const std::vector<AffineVertex>& avs, const Vec& x) {
  std::vector<Vec> verts;
  verts.reserve(avs.size());
  for (const auto& av : avs) verts.push_back(av.M * x + av.b);
  return verts;
}

// A piece's value is either a fixed vertex list or affine vertex rules;
// an empty fixed list is the empty set.
struct PieceValue {
  bool affine = false;
  std::vector<Vec> fixed;
  std::vector<AffineVertex> rules;

  PolytopeSet eval(const Vec& x) const {
    if (affine) return PolytopeSet(eval_affine(rules, x));
    if (fixed.empty()) return PolytopeSet();
    return PolytopeSet(fixed);
  }
};

PieceValue parse_piece_value(const json& j) {
  PieceValue pv;
  if (j.contains("value")) {
    pv.fixed = parse_vec_list(j.at("value"));
  } else if (j.contains("vertices")) {
    pv.affine = true;
    pv.rules = parse_affine_vertices(j.at("vertices"));
  } else {
    bad("piece needs 'value' or 'vertices'");
  }
  return pv;
}

PolytopeSet resolve_polytope(const Scenario& sc, const json& j) {
  if (j.is_string()) {
    std::string name = j.get<std::string>();
    auto it = sc.polytopes.find(name);
    if (it != sc.polytopes.end()) return it->second;
    auto is = sc.simplices.find(name);
    if (is != sc.simplices.end()) return PolytopeSet(is->second.vertices());
    bad("unknown polytope or simplex '" + name + "'");
  }
  return PolytopeSet(parse_vec_list(j));
}

ProductDomain resolve_domain(const Scenario& sc, const std::string& name) {
  auto ip = sc.products.find(name);
  if (ip != sc.products.end()) return ip->second;
  auto is = sc.simplices.find(name);
  if (is != sc.simplices.end()) return ProductDomain::single(is->second);
  bad("unknown domain '" + name + "'");
}

Correspondence parse_correspondence(const Scenario& sc, const std::string& name,
                                    const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  ProductDomain dom = resolve_domain(sc, j.at("domain").get<std::string>());
  PolytopeSet cod = resolve_polytope(sc, j.at("codomain"));

  if (kind == "constant") {
    std::vector<Vec> value = parse_vec_list(j.at("value"));
    auto eval = [value](const Vec&) -> PolytopeSet {
      if (value.empty()) return PolytopeSet();
      return PolytopeSet(value);
    };
    return Correspondence(dom, cod, eval, name);
  }
  if (kind == "affine_vertices") {
    auto rules = parse_affine_vertices(j.at("vertices"));
    for (const auto& r : rules) {
      if (r.M.cols() != dom.ambient_dim()) bad("affine vertex arity mismatch in '" + name + "'");
    }
    auto eval = [rules](const Vec& x) { return PolytopeSet(eval_affine(rules, x)); };
    return Correspondence(dom, cod, eval, name);
  }
  if (kind == "piecewise_region") {
    struct Piece {
      std::vector<LinearConstraint> when;
      PieceValue value;
    };
    std::vector<Piece> pieces;
    for (const auto& pj : j.at("pieces")) {
      Piece p;
      for (const auto& cj : pj.at("when")) p.when.push_back(parse_constraint(cj));
      p.value = parse_piece_value(pj);
      pieces.push_back(std::move(p));
    }
    PieceValue dflt;
    bool has_default = j.contains("default");
    if (has_default) {
      if (j.at("default").is_string() && j.at("default").get<std::string>() == "empty") {
        dflt.fixed.clear();
      } else {
        dflt.fixed = parse_vec_list(j.at("default"));
      }
    }
    auto eval = [pieces, dflt, has_default, name](const Vec& x) -> PolytopeSet {
      for (const auto& p : pieces) {
        bool all = true;
        for (const auto& c : p.when) {
          if (!c.holds(x)) { all = false; break; }
        }
        if (all) return p.value.eval(x);
      }
      if (has_default) {
        if (dflt.fixed.empty()) return PolytopeSet();
        return PolytopeSet(dflt.fixed);
      }
      throw Error(ErrorCode::invalid_scenario,
                  "piecewise correspondence '" + name +
                      "' has no matching piece and no default");
    };
    return Correspondence(dom, cod, eval, name);
  }
  if (kind == "empty_outside_region") {
    std::vector<LinearConstraint> region;
    for (const auto& cj : j.at("region")) region.push_back(parse_constraint(cj));
    PieceValue value = parse_piece_value(j);
    auto eval = [region, value](const Vec& x) -> PolytopeSet {
      for (const auto& c : region) {
        if (!c.holds(x)) return PolytopeSet();
      }
      return value.eval(x);
    };
    return Correspondence(dom, cod, eval, name);
  }
  bad("unknown correspondence kind '" + kind + "' in '" + name + "'");
}

PiecewiseLinearMap parse_g_entry(const json& j,
                                 const std::vector<PiecewiseLinearMap>& prior) {
  if (j.is_string()) {
    if (j.get<std::string>() == "identity") return PiecewiseLinearMap::identity();
    bad("unknown g spec '" + j.get<std::string>() + "'");
  }
  if (j.contains("complement_of")) {
    std::size_t idx = j.at("complement_of").get<std::size_t>();
    if (idx >= prior.size()) bad("complement_of must reference an earlier g entry");
    return prior[idx].complement();
  }
  if (j.contains("power")) {
    return PiecewiseLinearMap::power_samples(j.at("power").get<double>(),
                                             j.value("segments", 8));
  }
  std::vector<double> t = j.at("knots_t").get<std::vector<double>>();
  std::vector<double> v = j.at("knots_v").get<std::vector<double>>();
  return PiecewiseLinearMap(std::move(t), std::move(v));
}

} // namespace

const SimplexDomain& Scenario::simplex(const std::string& name) const {
  auto it = simplices.find(name);
  if (it == simplices.end()) bad("unknown simplex '" + name + "'");
  return it->second;
}

const ProductDomain& Scenario::domain(const std::string& name) const {
  auto it = products.find(name);
  if (it == products.end()) bad("unknown product domain '" + name + "'");
  return it->second;
}

const Correspondence& Scenario::correspondence(const std::string& name) const {
  auto it = correspondences.find(name);
  if (it == correspondences.end()) bad("unknown correspondence '" + name + "'");
  return it->second;
}

const WnqWitness& Scenario::wnq_witness(const std::string& name) const {
  auto it = wnq_witnesses.find(name);
  if (it == wnq_witnesses.end()) bad("unknown witness '" + name + "'");
  return it->second;
}

const BiconvexWitness& Scenario::biconvex_witness(const std::string& name) const {
  auto it = biconvex_witnesses.find(name);
  if (it == biconvex_witnesses.end()) bad("unknown biconvex witness '" + name + "'");
  return it->second;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();

  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    bad(std::string("parse error: ") + e.what());
  }

  Scenario sc;
  sc.path = path;
  sc.digest = fnv1a64(bytes);
  sc.raw = j;
  sc.version = j.value("version", "");
  if (sc.version != "corrfix/1") bad("unsupported version '" + sc.version + "'");

  if (j.contains("config")) {
    const auto& c = j.at("config");
    sc.config.mesh = c.value("mesh", sc.config.mesh);
    sc.config.tol = c.value("tol", sc.config.tol);
    sc.config.eps = c.value("eps", sc.config.eps);
    sc.config.eta = c.value("eta", sc.config.eta);
    sc.config.seed = c.value("seed", sc.config.seed);
  }
  require(sc.config.tol > 0 && sc.config.eps > 0 && sc.config.eta > 0,
          ErrorCode::invalid_scenario, "scenario tolerances must be positive");

  if (j.contains("simplices")) {
    for (const auto& [name, sj] : j.at("simplices").items())
      sc.simplices.emplace(name, SimplexDomain(parse_vec_list(sj)));
  }
  if (j.contains("products")) {
    for (const auto& [name, pj] : j.at("products").items()) {
      std::vector<SimplexDomain> factors;
      for (const auto& f : pj) factors.push_back(sc.simplex(f.get<std::string>()));
      sc.products.emplace(name, ProductDomain(std::move(factors)));
    }
  }
  if (j.contains("polytopes")) {
    for (const auto& [name, pj] : j.at("polytopes").items())
      sc.polytopes.emplace(name, PolytopeSet(parse_vec_list(pj)));
  }
  if (j.contains("correspondences")) {
    for (const auto& [name, cj] : j.at("correspondences").items())
      sc.correspondences.emplace(name, parse_correspondence(sc, name, cj));
  }
  if (j.contains("witnesses")) {
    for (const auto& [name, wj] : j.at("witnesses").items()) {
      std::string type = wj.value("type", "wnq");
      if (type == "wnq" || type == "wcg") {
        WnqWitness w;
        w.points = parse_vec_list(wj.at("points"));
        w.values = parse_vec_list(wj.at("values"));
        if (wj.contains("g")) {
          for (const auto& gj : wj.at("g")) w.g.push_back(parse_g_entry(gj, w.g));
        }
        sc.wnq_witnesses.emplace(name, std::move(w));
      } else if (type == "biconvex") {
        BiconvexWitness w;
        w.pairs = parse_vec_list(wj.at("pairs"));
        w.values = parse_vec_list(wj.at("values"));
        w.x_dim = wj.at("x_dim").get<int>();
        sc.biconvex_witnesses.emplace(name, std::move(w));
      } else {
        bad("unknown witness type '" + type + "'");
      }
    }
  }
  return sc;
}

QuasiGame build_game(const Scenario& sc) {
  if (!sc.raw.contains("equilibrium")) bad("scenario has no equilibrium block");
  const auto& ej = sc.raw.at("equilibrium");
  std::vector<AgentSpec> agents;
  for (const auto& aj : ej.at("agents")) {
    std::string strategy = aj.at("strategy").get<std::string>();
    WiStructure wi;
    if (aj.contains("W")) {
      const auto& wj = aj.at("W");
      std::string kind = wj.value("kind", "empty");
      if (kind == "empty") wi.kind = WiStructure::Kind::empty;
      else if (kind == "simplex") wi.kind = WiStructure::Kind::simplex;
      else if (kind == "biconvex_hull") wi.kind = WiStructure::Kind::biconvex_hull;
      else bad("unknown W structure kind '" + kind + "'");
      if (wj.contains("generators"))
        wi.generators = parse_vec_list(wj.at("generators"));
      wi.hull_order = wj.value("hull_order", wi.hull_order);
    }
    AgentSpec spec{aj.value("name", ""),
                   sc.simplex(strategy),
                   sc.correspondence(aj.at("A").get<std::string>()),
                   sc.correspondence(aj.at("B").get<std::string>()),
                   sc.correspondence(aj.at("P").get<std::string>()),
                   std::move(wi),
                   std::nullopt,
                   std::nullopt};
    if (aj.contains("witness"))
      spec.selection_witness = sc.wnq_witness(aj.at("witness").get<std::string>());
    if (aj.contains("biconvex_witness"))
      spec.biconvex_witness =
          sc.biconvex_witness(aj.at("biconvex_witness").get<std::string>());
    agents.push_back(std::move(spec));
  }
  return QuasiGame(std::move(agents));
}

GameVariant game_variant(const Scenario& sc) {
  std::string v = sc.raw.at("equilibrium").value("variant", "thm11");
  if (v == "thm11") return GameVariant::thm11;
  if (v == "thm12") return GameVariant::thm12;
  bad("unknown game variant '" + v + "'");
}

double rng_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

} // namespace corrfix
