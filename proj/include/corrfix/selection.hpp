#ifndef CORRFIX_SELECTION_HPP
#define CORRFIX_SELECTION_HPP

#include <memory>
#include <optional>

#include "corrfix/biconvex.hpp"
#include "corrfix/correspondence.hpp"
#include "corrfix/report.hpp"
#include "corrfix/witness.hpp"

namespace corrfix {

/// A closed-form continuous selector built from a witness. Evaluation goes
/// through barycentric coordinates at query time: for the wnq kind
/// f(sum lambda_i a_i) = sum g_i(lambda_i) b_i, for the biconvex kind
/// f(sum lambda_i (a_i,b_i)) = sum lambda_i c_i. Base points return the
/// witness values exactly.
class SelectionFunction {
public:
  enum class Kind { wnq, biconvex };

  Kind kind() const { return kind_; }
  const SimplexDomain& base() const { return base_; }
  const std::vector<Vec>& values() const { return values_; }
  int value_dim() const { return static_cast<int>(values_[0].size()); }

  Vec operator()(const Vec& x) const;

  /// Domain gate: inside the base simplex, and (biconvex kind with a hull
  /// gate) inside the hull indicator at cell resolution.
  bool in_domain(const Vec& x, double tol = 1e-9) const;
  const BiconvexGridSet* hull_gate() const { return gate_.get(); }

  double max_g_slope() const;

private:
  friend SelectionFunction build_wnq_selection(const SimplexDomain&,
                                               const WnqWitness&);
  friend SelectionFunction build_biconvex_selection(
      const std::vector<ProductPoint>&, const BiconvexWitness&,
      std::shared_ptr<const BiconvexGridSet>);

  SelectionFunction(Kind kind, SimplexDomain base, std::vector<Vec> values,
                    std::vector<PiecewiseLinearMap> g,
                    std::shared_ptr<const BiconvexGridSet> gate)
      : kind_(kind), base_(std::move(base)), values_(std::move(values)),
        g_(std::move(g)), gate_(std::move(gate)) {}

  Kind kind_;
  SimplexDomain base_;
  std::vector<Vec> values_;
  std::vector<PiecewiseLinearMap> g_;
  std::shared_ptr<const BiconvexGridSet> gate_;
};

/// Selector from a WNQ witness aligned to K's vertices (exact order match).
SelectionFunction build_wnq_selection(const SimplexDomain& K,
                                      const WnqWitness& w);

/// Selector on the biconvex hull of affinely independent base pairs; the
/// hull gate (when given) restricts the domain to the hull's grid indicator.
SelectionFunction build_biconvex_selection(
    const std::vector<ProductPoint>& pairs, const BiconvexWitness& w,
    std::shared_ptr<const BiconvexGridSet> hull_gate = nullptr);

/// Membership sweep f(x) in T(x) over the selection's domain lattice, plus
/// an empirical Lipschitz estimate over adjacent lattice points.
PropertyReport verify_selection(const SelectionFunction& f,
                                const Correspondence& T, int mesh, double tol);

} // namespace corrfix

#endif
