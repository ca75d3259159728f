#ifndef CORRFIX_CORRESPONDENCE_HPP
#define CORRFIX_CORRESPONDENCE_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "corrfix/domain.hpp"
#include "corrfix/polytope.hpp"

namespace corrfix {

/// A polytope-valued map on a (product-)simplex domain. Evaluators must be
/// pure and reentrant: the library evaluates them concurrently across grid
/// points.
class Correspondence {
public:
  using Evaluator = std::function<PolytopeSet(const Vec&)>;

  Correspondence(ProductDomain domain, PolytopeSet codomain, Evaluator eval,
                 std::string name = "");

  const ProductDomain& domain() const { return domain_; }
  const PolytopeSet& codomain() const { return codomain_; }
  const std::string& name() const { return name_; }

  /// Value at x. Outside the domain (beyond tol): OutsideDomainError.
  PolytopeSet evaluate(const Vec& x, double domain_tol = 1e-9) const;

private:
  ProductDomain domain_;
  PolytopeSet codomain_;
  Evaluator eval_;
  std::string name_;
};

/// T_r(x) = (T(x) + rB) ∩ Y with B the unit ball of `norm`. The empty set
/// thickens to the empty set. r = 0 gives x -> T(x) ∩ Y.
Correspondence thicken(const Correspondence& T, double r, Norm norm = Norm::linf);

/// Numerical adherence-of-graph membership: true iff some domain grid point
/// x' (spacing <= h) has |x' - x|_inf <= eta and dist(y, T(x')) <= eta.
/// One-sided: "true" certifies (x, y) is within eta of the graph sampled at
/// resolution h. Monotone in eta at fixed h.
bool graph_closure_membership(const Correspondence& T, const Vec& x,
                              const Vec& y, double eta, double h);

/// The graph of T sampled on the mesh-h grid.
struct GraphSample {
  std::vector<std::pair<Vec, PolytopeSet>> samples;
  double mesh = 0.0;
};

GraphSample sample_graph(const Correspondence& T, double h);

} // namespace corrfix

#endif
