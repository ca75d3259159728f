#include "corrfix/correspondence.hpp"

namespace corrfix {

Correspondence::Correspondence(ProductDomain domain, PolytopeSet codomain,
                               Evaluator eval, std::string name)
    : domain_(std::move(domain)), codomain_(std::move(codomain)),
      eval_(std::move(eval)), name_(std::move(name)) {
  require(static_cast<bool>(eval_), ErrorCode::invalid_argument,
          "correspondence needs an evaluator");
  require(!codomain_.empty(), ErrorCode::invalid_argument,
          "codomain must be a nonempty polytope");
}

PolytopeSet Correspondence::evaluate(const Vec& x, double domain_tol) const {
  if (!domain_.contains_point(x, domain_tol)) {
    throw OutsideDomainError("evaluation point outside the domain of " +
                                 (name_.empty() ? "correspondence" : name_),
                             0.0);
  }
  PolytopeSet v = eval_(x);
  if (!v.empty()) {
    require(v.ambient_dim() == codomain_.ambient_dim(),
            ErrorCode::dimension_mismatch,
            "correspondence value does not live in the codomain space");
  }
  return v;
}

Correspondence thicken(const Correspondence& T, double r, Norm norm) {
  require(r >= 0, ErrorCode::invalid_argument,
          "thickening radius must be nonnegative");
  PolytopeSet Y = T.codomain();
  auto base = T; // capture by value: thickened map stays pure
  auto eval = [base, Y, r, norm](const Vec& x) -> PolytopeSet {
    PolytopeSet v = base.evaluate(x);
    if (v.empty()) return v;
    return intersect(minkowski_ball_sum(v, r, norm), Y);
  };
  return Correspondence(T.domain(), Y, eval,
                        T.name().empty() ? "" : T.name() + "+" + fmt_double(r));
}

bool graph_closure_membership(const Correspondence& T, const Vec& x,
                              const Vec& y, double eta, double h) {
  require(eta > 0, ErrorCode::invalid_argument, "eta must be positive");
  require(h > 0, ErrorCode::invalid_argument, "grid mesh must be positive");
  for (const auto& xp : T.domain().grid_points(h)) {
    if ((xp - x).lpNorm<Eigen::Infinity>() > eta) continue;
    PolytopeSet v = T.evaluate(xp);
    if (v.empty()) continue;
    if (v.distance_to(y) <= eta) return true;
  }
  return false;
}

GraphSample sample_graph(const Correspondence& T, double h) {
  GraphSample g;
  g.mesh = h;
  for (const auto& xp : T.domain().grid_points(h)) {
    g.samples.emplace_back(xp, T.evaluate(xp));
  }
  return g;
}

} // namespace corrfix
