#ifndef CORRFIX_FIXED_POINT_HPP
#define CORRFIX_FIXED_POINT_HPP

#include <functional>
#include <optional>

#include "corrfix/correspondence.hpp"
#include "corrfix/report.hpp"
#include "corrfix/selection.hpp"

namespace corrfix {

struct FixedPointResult {
  Vec x_star;
  double residual = 0.0; // |f(x*) - x*|_inf, re-evaluated at return
  int mesh_order = 0;    // deepest Kuhn order consulted (0: probes sufficed)
  long cells_visited = 0;
  double membership_defect = -1.0; // dist(x*, T(x*)) when a T is in play
  bool converged = true;
  std::string note;
};

/// Sperner label of a lattice vertex: among coordinates that do not increase
/// under f (in barycentric displacement), the one with the most negative
/// displacement; ties and the all-zero case resolve to the lowest admissible
/// index. Labels never point at a zero coordinate.
int sperner_label(const SelectionFunction& f, const SimplexDomain& K,
                  const Eigen::VectorXi& numerators, int m);

struct SpernerScan {
  std::vector<LatticeCell> complete_cells;
  long cells_scanned = 0;
};

/// Exhaustive label scan of the order-m Kuhn triangulation. With
/// `first_only` the scan stops at the first completely labeled cell.
SpernerScan sperner_scan(const SelectionFunction& f, const SimplexDomain& K,
                         int m, bool first_only);

/// Brouwer fixed point of a continuous self-map selection on K: probe
/// iterates, Sperner localization on refining Kuhn meshes, deterministic
/// local descent; the returned residual is re-evaluated independently.
FixedPointResult brouwer_fixed_point(const SelectionFunction& f,
                                     const SimplexDomain& K, double eps,
                                     int mesh_cap = 64);

/// Checks the witness at the solver grid, builds the selection, solves, and
/// reports the membership defect dist(x*, T(x*)).
FixedPointResult solve_wnq_fixed_point(const Correspondence& T,
                                       const WnqWitness& w,
                                       const SimplexDomain& K, double eps,
                                       int check_mesh = 32, double tol = 1e-9,
                                       int mesh_cap = 64);

struct NetStep {
  double radius = 0.0;
  Vec x;
  double defect = 0.0; // dist(x, T_r(x))
  bool witness_route = false;
};

struct ApproxNetTrace {
  enum class Verdict { pass, fail, inconclusive };
  std::vector<NetStep> steps;
  Vec cluster;
  double cluster_diameter = 0.0; // max pairwise |.|_inf over the tail
  bool closure_certificate = false;
  double eta = 0.0;
  double closure_mesh = 0.0;
  Verdict verdict = Verdict::fail;
  std::string note;
};

struct NetConfig {
  int grid_order = 64;     // defect-scan lattice order on K
  int check_mesh = 32;     // witness validation lattice
  double tol = 1e-9;       // membership tolerance for witness checks
  double closure_mesh = 0.01;
  int brouwer_mesh_cap = 64;
};

using WitnessProvider = std::function<std::optional<WnqWitness>(double radius)>;

/// Approximate fixed points of the thickenings T_r, r over a strictly
/// decreasing schedule. Each step must reach defect dist(x_k, T_r(x_k)) <=
/// eps: a supplied witness drives the constructive selection route first;
/// otherwise (or when that route misses the defect bound) a deterministic
/// defect-descent solve stands in. The cluster point of the trace tail is
/// certified against the graph adherence at resolution (eta, closure_mesh).
ApproxNetTrace approx_fixed_point_net(const Correspondence& T,
                                      const std::vector<double>& radii,
                                      const WitnessProvider& provider,
                                      const SimplexDomain& K, double eps,
                                      double eta, const NetConfig& cfg = {});

struct CorollaryResult {
  PropertyReport containment; // grid pre-check of adherence(S) within T
  std::optional<ApproxNetTrace> trace;
  std::optional<FixedPointResult> fixed_point; // x* with defect against T
};

/// Fixed point of T through a dominated correspondence S: pre-checks the
/// grid containment of S's adherence samples in T and that S is nonempty,
/// then runs the approximate net on S and reports the cluster point as a
/// fixed point of T with its defect.
CorollaryResult solve_corollary_pair(const Correspondence& S,
                                     const Correspondence& T,
                                     const SimplexDomain& K, int grid_order,
                                     double eps, double eta,
                                     const WitnessProvider& provider = nullptr,
                                     const NetConfig& cfg = {});

} // namespace corrfix

#endif
