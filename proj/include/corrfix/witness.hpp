#ifndef CORRFIX_WITNESS_HPP
#define CORRFIX_WITNESS_HPP

#include <vector>

#include "corrfix/common.hpp"

namespace corrfix {

/// Strictly increasing piecewise-linear bijection of [0,1] with exact
/// endpoint conditions g(0) = 0, g(1) = 1, given by sorted knot lists.
class PiecewiseLinearMap {
public:
  PiecewiseLinearMap(); // identity
  PiecewiseLinearMap(std::vector<double> t, std::vector<double> v);

  static PiecewiseLinearMap identity() { return PiecewiseLinearMap(); }
  /// Knot samples of t^p on a uniform grid with `segments` pieces.
  static PiecewiseLinearMap power_samples(double p, int segments);
  /// t -> 1 - g(1 - t); the complement pairs with g so the two sum to 1
  /// across complementary arguments.
  PiecewiseLinearMap complement() const;

  double operator()(double t) const;
  bool is_identity() const;
  double max_slope() const;
  const std::vector<double>& knots_t() const { return t_; }
  const std::vector<double>& knots_v() const { return v_; }

private:
  std::vector<double> t_, v_;
};

/// Values y_i chosen at base points x_i whose convex combinations are meant
/// to track the correspondence.
struct WcgWitness {
  std::vector<Vec> points;
  std::vector<Vec> values;
};

/// WCG data plus a componentwise reparameterization g of the weights.
/// An empty g means the identity family.
struct WnqWitness {
  std::vector<Vec> points;
  std::vector<Vec> values;
  std::vector<PiecewiseLinearMap> g;

  static WnqWitness from_wcg(const WcgWitness& w) {
    return WnqWitness{w.points, w.values, {}};
  }
  const PiecewiseLinearMap& g_at(std::size_t i) const;
  bool identity_g() const;
};

/// Base pairs (x_i, y_i) in a biconvex set, stored stacked, with chosen
/// values z_i of the correspondence at the pairs. `x_dim` splits the stack.
struct BiconvexWitness {
  std::vector<Vec> pairs;
  std::vector<Vec> values;
  int x_dim = 0;
};

} // namespace corrfix

#endif
