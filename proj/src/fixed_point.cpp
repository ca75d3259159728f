#include "corrfix/fixed_point.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "corrfix/convexity.hpp"

namespace corrfix {

namespace {

double residual_at(const SelectionFunction& f, const Vec& x) {
  return (f(x) - x).lpNorm<Eigen::Infinity>();
}

// Deterministic pattern descent over barycentric coordinates: moves along
// +/- (e_i - e_j) with halving steps, strict-improvement acceptance.
Vec pattern_minimize(const SimplexDomain& K, Vec lam,
                     const std::function<double(const Vec&)>& obj_at_point,
                     double target, double floor_step) {
  auto obj = [&](const Vec& l) { return obj_at_point(K.point_at(l)); };
  const int n = K.vertex_count();
  double step = 0.25;
  double cur = obj(lam);
  while (step > floor_step && cur > target) {
    bool improved = false;
    Vec best_lam = lam;
    double best = cur;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j || lam[j] < step) continue;
        Vec cand = lam;
        cand[i] += step;
        cand[j] -= step;
        double v = obj(cand);
        if (v < best) {
          best = v;
          best_lam = cand;
          improved = true;
        }
      }
    }
    if (improved) {
      lam = best_lam;
      cur = best;
    } else {
      step *= 0.5;
    }
  }
  return lam;
}

Vec km_iterate(const SelectionFunction& f, Vec x, int iters, double target,
               Vec* best_x, double* best_r) {
  for (int k = 0; k < iters; ++k) {
    Vec fx = f(x);
    double r = (fx - x).lpNorm<Eigen::Infinity>();
    if (r < *best_r) {
      *best_r = r;
      *best_x = x;
    }
    if (r <= target) break;
    x = 0.5 * (x + fx);
  }
  return x;
}

} // namespace

int sperner_label(const SelectionFunction& f, const SimplexDomain& K,
                  const Eigen::VectorXi& numerators, int m) {
  const int n = K.vertex_count();
  Vec lam = lattice_to_lambda(numerators, m);
  Vec x = K.point_at(lam);
  Vec fx = f(x);
  BarycentricPoint mu = K.coordinates(fx, 1e-7);
  int label = -1;
  double best_disp = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (numerators[i] == 0) continue;
    double disp = mu.lambda[i] - lam[i];
    if (disp <= 0.0 && disp < best_disp) {
      best_disp = disp;
      label = i;
    }
  }
  if (label < 0) {
    // No supported coordinate decreases: f(x) = x on the support.
    for (int i = 0; i < n; ++i) {
      if (numerators[i] > 0) return i;
    }
  }
  return label;
}

SpernerScan sperner_scan(const SelectionFunction& f, const SimplexDomain& K,
                         int m, bool first_only) {
  SpernerScan scan;
  const int n = K.vertex_count();
  std::map<std::vector<int>, int> labels;
  auto label_of = [&](const Eigen::VectorXi& k) {
    std::vector<int> key(k.data(), k.data() + k.size());
    auto it = labels.find(key);
    if (it != labels.end()) return it->second;
    int l = sperner_label(f, K, k, m);
    labels.emplace(std::move(key), l);
    return l;
  };
  for (const auto& cell : kuhn_lattice_cells(n, m)) {
    ++scan.cells_scanned;
    unsigned seen = 0;
    for (const auto& v : cell.numerators) seen |= 1u << label_of(v);
    if (seen == (1u << n) - 1u) {
      scan.complete_cells.push_back(cell);
      if (first_only) return scan;
    }
  }
  return scan;
}

FixedPointResult brouwer_fixed_point(const SelectionFunction& f,
                                     const SimplexDomain& K, double eps,
                                     int mesh_cap) {
  require(eps > 0, ErrorCode::invalid_argument, "eps must be positive");
  require(f.value_dim() == K.ambient_dim(), ErrorCode::dimension_mismatch,
          "selection is not a self-map of K");
  const double target = std::min(eps, 1e-9);
  auto resid = [&](const Vec& x) { return residual_at(f, x); };

  FixedPointResult res;
  Vec best_x = K.centroid();
  double best_r = resid(best_x);

  // Probe phase: damped iterates from the centroid.
  if (best_r > target) {
    km_iterate(f, best_x, 600, target, &best_x, &best_r);
  }

  // Sperner localization on refining meshes, then local descent.
  if (best_r > target) {
    for (int m = 1; m <= mesh_cap; m *= 2) {
      res.mesh_order = m;
      SpernerScan scan = sperner_scan(f, K, m, /*first_only=*/true);
      res.cells_visited += scan.cells_scanned;
      if (!scan.complete_cells.empty()) {
        const auto& cell = scan.complete_cells.front();
        Vec lam = Vec::Zero(K.vertex_count());
        for (const auto& v : cell.numerators)
          lam += lattice_to_lambda(v, m);
        lam /= static_cast<double>(cell.numerators.size());
        Vec cand = K.point_at(lam);
        double r = resid(cand);
        if (r < best_r) {
          best_r = r;
          best_x = cand;
        }
        km_iterate(f, cand, 300, target, &best_x, &best_r);
        Vec lam_best = K.coordinates(best_x, 1e-9).lambda;
        Vec polished = pattern_minimize(K, lam_best, resid, target, 1e-15);
        Vec px = K.point_at(polished);
        double pr = resid(px);
        if (pr < best_r) {
          best_r = pr;
          best_x = px;
        }
      }
      if (best_r <= target) break;
    }
  }

  if (best_r > target && best_r <= 64 * eps) {
    Vec lam_best = K.coordinates(best_x, 1e-9).lambda;
    Vec polished = pattern_minimize(K, lam_best, resid, target, 1e-15);
    Vec px = K.point_at(polished);
    double pr = resid(px);
    if (pr < best_r) {
      best_r = pr;
      best_x = px;
    }
  }

  res.x_star = best_x;
  res.residual = resid(best_x);
  res.converged = res.residual <= eps;
  if (!res.converged) {
    res.note = "mesh cap " + std::to_string(mesh_cap) +
               " reached; best residual " + fmt_double(res.residual);
  }
  return res;
}

FixedPointResult solve_wnq_fixed_point(const Correspondence& T,
                                       const WnqWitness& w,
                                       const SimplexDomain& K, double eps,
                                       int check_mesh, double tol,
                                       int mesh_cap) {
  PropertyReport rep = check_wnq(T, w, check_mesh, tol);
  if (!rep.pass()) {
    throw Error(ErrorCode::witness_invalid,
                "witness fails the wnq sweep at the solver grid (" +
                    std::to_string(rep.violations.size()) + " violations)");
  }
  SelectionFunction f = build_wnq_selection(K, w);
  FixedPointResult res = brouwer_fixed_point(f, K, eps, mesh_cap);
  PolytopeSet v = T.evaluate(res.x_star);
  res.membership_defect = v.empty() ? std::numeric_limits<double>::infinity()
                                    : v.distance_to(res.x_star);
  return res;
}

namespace {

// Deterministic approximate-fixed-point solve on the defect function
// d(x) = dist(x, T(x)): lattice scan (ties to the lexicographically
// smallest point), then pattern descent.
std::pair<Vec, double> defect_solve(const Correspondence& Tr,
                                    const SimplexDomain& K, double eps,
                                    int grid_order) {
  auto defect = [&](const Vec& x) {
    PolytopeSet v = Tr.evaluate(x);
    return v.empty() ? std::numeric_limits<double>::infinity()
                     : v.distance_to(x);
  };
  auto lattice = simplex_lattice(K.vertex_count(), grid_order);
  std::vector<double> vals(lattice.size());
  std::vector<Vec> pts(lattice.size());
  parallel_for(lattice.size(), [&](std::size_t i) {
    pts[i] = K.point_at(lattice_to_lambda(lattice[i], grid_order));
    vals[i] = defect(pts[i]);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < lattice.size(); ++i) {
    if (vals[i] < vals[best] ||
        (vals[i] == vals[best] && lex_less(pts[i], pts[best])))
      best = i;
  }
  Vec lam = lattice_to_lambda(lattice[best], grid_order);
  double target = std::min(eps, 1e-10);
  Vec polished = pattern_minimize(K, lam, defect, target, 1e-15);
  Vec px = K.point_at(polished);
  double pd = defect(px);
  if (pd <= vals[best]) return {px, pd};
  return {pts[best], vals[best]};
}

Vec seb_center(const std::vector<Vec>& pts) {
  if (pts.size() == 1) return pts[0];
  if (pts.size() == 2) return 0.5 * (pts[0] + pts[1]);
  // Three points: smallest pair ball covering the third, else circumcenter.
  int bi = -1, bj = -1;
  double best_rad = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      Vec c = 0.5 * (pts[static_cast<std::size_t>(i)] + pts[static_cast<std::size_t>(j)]);
      double rad = (pts[static_cast<std::size_t>(i)] - c).norm();
      int k = 3 - i - j;
      if ((pts[static_cast<std::size_t>(k)] - c).norm() <= rad + 1e-12 && rad < best_rad) {
        best_rad = rad;
        bi = i;
        bj = j;
      }
    }
  }
  if (bi >= 0)
    return 0.5 * (pts[static_cast<std::size_t>(bi)] + pts[static_cast<std::size_t>(bj)]);
  Vec u = pts[1] - pts[0], v = pts[2] - pts[0];
  Eigen::Matrix2d G;
  G << u.dot(u), u.dot(v), u.dot(v), v.dot(v);
  Eigen::Vector2d rhs(0.5 * u.dot(u), 0.5 * v.dot(v));
  Eigen::FullPivLU<Eigen::Matrix2d> lu(G);
  if (!lu.isInvertible()) {
    // Collinear: farthest pair midpoint.
    double d01 = (pts[0] - pts[1]).norm();
    double d02 = (pts[0] - pts[2]).norm();
    double d12 = (pts[1] - pts[2]).norm();
    if (d01 >= d02 && d01 >= d12) return 0.5 * (pts[0] + pts[1]);
    if (d02 >= d12) return 0.5 * (pts[0] + pts[2]);
    return 0.5 * (pts[1] + pts[2]);
  }
  Eigen::Vector2d ab = lu.solve(rhs);
  return pts[0] + ab[0] * u + ab[1] * v;
}

} // namespace

ApproxNetTrace approx_fixed_point_net(const Correspondence& T,
                                      const std::vector<double>& radii,
                                      const WitnessProvider& provider,
                                      const SimplexDomain& K, double eps,
                                      double eta, const NetConfig& cfg) {
  require(!radii.empty(), ErrorCode::invalid_argument, "empty radii schedule");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] > 0, ErrorCode::invalid_argument, "radii must be positive");
    if (i > 0)
      require(radii[i] < radii[i - 1], ErrorCode::invalid_argument,
              "radii must be strictly decreasing");
  }
  require(eta > 0, ErrorCode::invalid_argument, "eta must be positive");

  ApproxNetTrace trace;
  trace.eta = eta;
  trace.closure_mesh = cfg.closure_mesh;

  bool all_within = true;
  for (double r : radii) {
    Correspondence Tr = thicken(T, r);
    NetStep step;
    step.radius = r;
    bool solved = false;

    if (provider) {
      if (auto w = provider(r)) {
        // Constructive route: validated witness, selection, Brouwer.
        PropertyReport rep = check_wnq(Tr, *w, cfg.check_mesh, cfg.tol);
        if (!rep.pass()) {
          throw Error(ErrorCode::witness_invalid,
                      "net witness at radius " + fmt_double(r) +
                          " fails its thickened sweep");
        }
        SelectionFunction f = build_wnq_selection(K, *w);
        FixedPointResult fr =
            brouwer_fixed_point(f, K, eps, cfg.brouwer_mesh_cap);
        PolytopeSet v = Tr.evaluate(fr.x_star);
        double d = v.empty() ? std::numeric_limits<double>::infinity()
                             : v.distance_to(fr.x_star);
        if (d <= eps) {
          step.x = fr.x_star;
          step.defect = d;
          step.witness_route = true;
          solved = true;
        }
      }
    }
    if (!solved) {
      auto [x, d] = defect_solve(Tr, K, eps, cfg.grid_order);
      step.x = x;
      step.defect = d;
    }
    if (step.defect > eps) all_within = false;
    trace.steps.push_back(std::move(step));
  }

  const std::size_t tail = std::min<std::size_t>(3, trace.steps.size());
  std::vector<Vec> tail_pts;
  for (std::size_t i = trace.steps.size() - tail; i < trace.steps.size(); ++i)
    tail_pts.push_back(trace.steps[i].x);
  trace.cluster = seb_center(tail_pts);
  for (std::size_t i = 0; i < tail_pts.size(); ++i)
    for (std::size_t j = i + 1; j < tail_pts.size(); ++j)
      trace.cluster_diameter =
          std::max(trace.cluster_diameter,
                   (tail_pts[i] - tail_pts[j]).lpNorm<Eigen::Infinity>());

  trace.closure_certificate = graph_closure_membership(
      T, trace.cluster, trace.cluster, eta, cfg.closure_mesh);

  if (!all_within) {
    trace.verdict = ApproxNetTrace::Verdict::fail;
    trace.note = "some step missed the defect bound";
  } else if (trace.cluster_diameter > eta) {
    trace.verdict = ApproxNetTrace::Verdict::inconclusive;
    trace.note = "trace tail did not stabilize within eta";
  } else if (!trace.closure_certificate) {
    trace.verdict = ApproxNetTrace::Verdict::fail;
    trace.note = "closure certificate false at the cluster point";
  } else {
    trace.verdict = ApproxNetTrace::Verdict::pass;
  }
  return trace;
}

CorollaryResult solve_corollary_pair(const Correspondence& S,
                                     const Correspondence& T,
                                     const SimplexDomain& K, int grid_order,
                                     double eps, double eta,
                                     const WitnessProvider& provider,
                                     const NetConfig& cfg) {
  CorollaryResult out;
  out.containment.property = "corollary-containment";
  out.containment.grid = "lattice mesh=1/" + std::to_string(grid_order) +
                         ", adherence window eta=" + fmt_double(eta);

  auto lattice = simplex_lattice(K.vertex_count(), grid_order);
  std::vector<Vec> pts;
  pts.reserve(lattice.size());
  for (const auto& k : lattice)
    pts.push_back(K.point_at(lattice_to_lambda(k, grid_order)));
  std::vector<PolytopeSet> svals(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { svals[i] = S.evaluate(pts[i]); });

  for (std::size_t i = 0; i < pts.size(); ++i) {
    ++out.containment.combinations_tested;
    if (svals[i].empty()) {
      out.containment.violations.push_back(
          {pts[i], std::numeric_limits<double>::infinity(), "S empty"});
      continue;
    }
    PolytopeSet tv = T.evaluate(pts[i]);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if ((pts[j] - pts[i]).lpNorm<Eigen::Infinity>() > eta) continue;
      if (svals[j].empty()) continue;
      for (const auto& v : svals[j].vertices()) {
        double d = tv.empty() ? std::numeric_limits<double>::infinity()
                              : tv.distance_to(v);
        if (d > cfg.tol) {
          out.containment.violations.push_back(
              {pts[i], d, "adherence sample from " + fmt_vec(pts[j])});
        }
      }
    }
  }
  out.containment.sort_violations();
  if (!out.containment.pass()) return out;

  std::vector<double> radii;
  for (int k = 1; k <= 10; ++k) radii.push_back(std::pow(2.0, -k));
  out.trace = approx_fixed_point_net(S, radii, provider, K, eps, eta, cfg);

  FixedPointResult fp;
  fp.x_star = out.trace->cluster;
  PolytopeSet tv = T.evaluate(fp.x_star);
  fp.membership_defect = tv.empty() ? std::numeric_limits<double>::infinity()
                                    : tv.distance_to(fp.x_star);
  fp.residual = fp.membership_defect;
  fp.converged = fp.membership_defect <= eps &&
                 out.trace->verdict != ApproxNetTrace::Verdict::fail;
  fp.note = "cluster point of the dominated net reported against T";
  out.fixed_point = fp;
  return out;
}

} // namespace corrfix
