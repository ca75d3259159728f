#ifndef CORRFIX_CONVEXITY_HPP
#define CORRFIX_CONVEXITY_HPP

#include <optional>

#include "corrfix/biconvex.hpp"
#include "corrfix/correspondence.hpp"
#include "corrfix/report.hpp"
#include "corrfix/witness.hpp"

namespace corrfix {

// Grid-certified checkers for the correspondence classes. A pass certifies
// the defining membership relation on the stated lambda lattice only; the
// reports record the grid so the claim stays honest.

/// Relation: sum(lambda_i y_i) in T(sum(lambda_i x_i)) on the lattice.
PropertyReport check_wcg(const Correspondence& T, const WcgWitness& w,
                         int mesh, double tol);

/// Same sweep with reparameterized weights y = sum(g_i(lambda_i) y_i).
/// Rejects witnesses whose g family violates sum_i g_i(lambda_i) = 1 on the
/// grid (within 1e-9) with a normalization error distinct from plain
/// witness invalidity.
PropertyReport check_wnq(const Correspondence& T, const WnqWitness& w,
                         int mesh, double tol);

/// Sweeps only biconvex combinations of the base pairs: the shared-x or
/// shared-y family. Mixed pairs admit no biconvex combinations; the check
/// passes vacuously and says so.
PropertyReport check_weakly_biconvex(const Correspondence& T,
                                     const BiconvexGridSet* B,
                                     const BiconvexWitness& w, int mesh,
                                     double tol);

enum class StarBase { wcg, wnq };

/// Runs the base checker on every thickening T_r, r over a decreasing radii
/// list, with one witness per radius. Pass iff all radii pass.
PropertyReport check_star_variant(const Correspondence& T, StarBase base,
                                  const std::vector<double>& radii,
                                  const std::vector<WnqWitness>& witnesses,
                                  int mesh, double tol);

struct WitnessSearchResult {
  std::optional<WnqWitness> witness;
  long candidates_tested = 0;
};

/// Deterministic first-fit search over a finite candidate catalog: values
/// range over each T(x_i)'s vertices plus lattice-sampled hull points,
/// g over identity and (for two base points) power-knot pairs. Candidates
/// are ordered lexicographically; the first one passing the checker wins.
WitnessSearchResult search_witness(const Correspondence& T, StarBase property,
                                   const std::vector<Vec>& base_points,
                                   int value_density, int g_family_size,
                                   int mesh = 32, double tol = 1e-9);

} // namespace corrfix

#endif
