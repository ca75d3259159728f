#ifndef CORRFIX_QUASI_GAME_HPP
#define CORRFIX_QUASI_GAME_HPP

#include <memory>
#include <optional>

#include "corrfix/convexity.hpp"
#include "corrfix/correspondence.hpp"
#include "corrfix/fixed_point.hpp"
#include "corrfix/ratlp.hpp"
#include "corrfix/selection.hpp"

namespace corrfix {

/// Declared structure of the region W_i = {z : (A_i ∩ P_i)(z) != empty}.
/// The declaration is part of the scenario; the solver cross-checks it on
/// the grid but branches on the declaration.
struct WiStructure {
  enum class Kind { empty, simplex, biconvex_hull };
  Kind kind = Kind::empty;
  std::vector<Vec> generators; // cl W_i simplex vertices / hull pair points
  int hull_order = 32;         // grid order for the biconvex hull indicator
};

struct AgentSpec {
  std::string name;
  SimplexDomain strategy; // X_i
  Correspondence A, B, P; // over Z into X_i
  WiStructure wi;
  std::optional<WnqWitness> selection_witness;       // Thm-11 style games
  std::optional<BiconvexWitness> biconvex_witness;   // Thm-12 style games
};

/// The (X_i, A_i, B_i, P_i) family over Z = X × X with X the product of the
/// strategy simplices.
class QuasiGame {
public:
  explicit QuasiGame(std::vector<AgentSpec> agents);

  int agent_count() const { return static_cast<int>(agents_.size()); }
  const AgentSpec& agent(int i) const { return agents_[static_cast<std::size_t>(i)]; }
  const ProductDomain& Z() const { return *Z_; }
  const ProductDomain& X() const { return *X_; }

  Vec x_part(const Vec& z, int i) const;
  Vec y_part(const Vec& z, int i) const;

  struct Emptiness {
    bool is_empty = false;
    std::string token; // Farkas certificate / feasible point / empty-value tag
  };

  PolytopeSet a_cap_p(int i, const Vec& z) const;
  /// Exact emptiness verdict for (A_i ∩ P_i)(z) with its proof token.
  Emptiness a_cap_p_exact(int i, const Vec& z) const;

  /// Membership per the declared structure (open sets: strict interior).
  bool declared_wi_contains(int i, const Vec& z) const;
  std::shared_ptr<const BiconvexGridSet> wi_hull(int i) const;

private:
  std::vector<AgentSpec> agents_;
  std::shared_ptr<ProductDomain> X_, Z_;
  std::vector<std::optional<SimplexDomain>> wi_simplex_;
  std::vector<std::shared_ptr<const BiconvexGridSet>> wi_hull_;
};

struct RegionWi {
  int agent = 0;
  int grid_order = 0;
  std::vector<Vec> grid;
  std::vector<bool> indicator; // exact LP nonemptiness per grid point
  std::string structure;
  std::vector<std::size_t> boundary_flags; // declaration/indicator disagreements
  long nonempty_count = 0;
};

/// Exact nonemptiness indicator of (A_i ∩ P_i) on the Z grid, cross-checked
/// against the declared structure (disagreements flagged, not fatal).
RegionWi compute_wi(const QuasiGame& G, int i, int grid_order);

/// The product correspondence of the quasi fixed-point construction:
/// the i-th x-factor is {f_i(z)} on W_i and all of X_i off it; the j-th
/// y-factor is the (closed) constraint value B_j(z).
Correspondence build_product_map(
    const QuasiGame& G, const std::vector<std::optional<SelectionFunction>>& f);

struct EquilibriumCertificate {
  Vec x, y;
  std::vector<double> closure_residuals; // dist(y_i, B_i(x,y)) per agent
  std::vector<std::string> emptiness_tokens;
  double eps = 0.0, eta = 0.0;
  double defect = 0.0; // product-map defect at (x, y)
};

struct EquilibriumOutcome {
  enum class Kind { certificate, scenario_fault, inconclusive };
  Kind kind = Kind::inconclusive;
  std::optional<EquilibriumCertificate> certificate;
  PropertyReport conditions;
  PropertyReport verification;
  std::string fault;
  Vec best_point;
  double best_defect = 0.0;
  std::vector<RegionWi> regions;
};

enum class GameVariant { thm11, thm12 };

struct EqConfig {
  int grid_order = 8;      // Z-grid lattice order per factor
  double eps = 1e-6;       // product-map defect target
  double eta = 1e-3;       // closure-membership tolerance
  double tol = 1e-9;       // membership tolerance
  double usc_tol = 0.1;    // neighbor-jump threshold for the usc surrogate
  double pullback = 1e-6;  // inward pull for values at cl W_i vertices
  int selection_mesh = 16; // witness validation lattice on the W simplex
  double selection_tol = 1e-6;
  GameVariant variant = GameVariant::thm11;
};

/// Grid diagnostics for the equilibrium theorem hypotheses: A_i within B_i,
/// B_i nonempty, an upper-semicontinuity surrogate for cl B_i, and the
/// irreflexivity condition x_i not in (co) P_i(z) on W_i.
PropertyReport check_conditions(const QuasiGame& G, GameVariant variant,
                                int grid_order, const EqConfig& cfg);

/// Full pipeline: conditions, W_i regions, selections on cl W_i, product
/// map, grid + local fixed-point search, the dichotomy step, and either a
/// verified certificate or a scenario-fault / inconclusive report.
EquilibriumOutcome solve_equilibrium(const QuasiGame& G, const EqConfig& cfg);

/// Definition check for a claimed equilibrium: per agent, closure residual
/// dist(y_i, B_i(x,y)) <= eta and exact emptiness of (A_i ∩ P_i)(x,y).
PropertyReport verify_equilibrium(const QuasiGame& G, const Vec& x,
                                  const Vec& y, double eta);

} // namespace corrfix

#endif
