#include "corrfix/polytope.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "corrfix/ratlp.hpp"

namespace corrfix {

PolytopeSet::PolytopeSet(std::vector<Vec> vertices) : verts_(std::move(vertices)) {
  if (verts_.empty()) return;
  const Eigen::Index d = verts_[0].size();
  for (const auto& v : verts_) {
    require(v.size() == d, ErrorCode::dimension_mismatch,
            "polytope vertices have mixed dimensions");
  }
}

PolytopeSet PolytopeSet::point(const Vec& v) { return PolytopeSet({v}); }

PolytopeSet PolytopeSet::interval(double lo, double hi) {
  require(lo <= hi, ErrorCode::invalid_argument, "interval with lo > hi");
  Vec a(1), b(1);
  a[0] = lo;
  b[0] = hi;
  if (lo == hi) return PolytopeSet({a});
  return PolytopeSet({a, b});
}

double PolytopeSet::distance_to(const Vec& y) const {
  if (empty()) return std::numeric_limits<double>::infinity();
  require(y.size() == ambient_dim(), ErrorCode::dimension_mismatch,
          "distance query dimension mismatch");
  const std::size_t k = verts_.size();
  std::vector<Vec> q(k);
  double scale2 = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    q[i] = verts_[i] - y;
    scale2 = std::max(scale2, q[i].squaredNorm());
  }
  const double eps_stop = 1e-13 * scale2;
  const double eps_w = 1e-14;

  // Wolfe (1976) min-norm point in conv{q_i}: maintain a corral S with
  // weights w; alternate support-point additions and affine minimizations.
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < k; ++i)
    if (q[i].squaredNorm() < q[i0].squaredNorm()) i0 = i;
  std::vector<std::size_t> S{i0};
  std::vector<double> w{1.0};
  Vec x = q[i0];

  for (int major = 0; major < 200; ++major) {
    if (x.squaredNorm() <= eps_stop) break;
    std::size_t imin = 0;
    double best = x.dot(q[0]);
    for (std::size_t i = 1; i < k; ++i) {
      double d = x.dot(q[i]);
      if (d < best) { best = d; imin = i; }
    }
    if (best >= x.squaredNorm() - eps_stop) break;
    if (std::find(S.begin(), S.end(), imin) != S.end()) break;
    S.push_back(imin);
    w.push_back(0.0);

    for (int minor = 0; minor < 100; ++minor) {
      const std::size_t s = S.size();
      Mat kkt = Mat::Zero(s + 1, s + 1);
      for (std::size_t a = 0; a < s; ++a) {
        for (std::size_t b = 0; b < s; ++b) kkt(a, b) = q[S[a]].dot(q[S[b]]);
        kkt(a, s) = 1.0;
        kkt(s, a) = 1.0;
      }
      Vec rhs = Vec::Zero(s + 1);
      rhs[s] = 1.0;
      Eigen::FullPivLU<Mat> lu(kkt);
      if (!lu.isInvertible()) {
        // Affinely dependent corral: drop the newest point and stop.
        S.pop_back();
        w.pop_back();
        break;
      }
      Vec sol = lu.solve(rhs);
      bool interior = true;
      for (std::size_t a = 0; a < s; ++a)
        if (sol[a] <= eps_w) { interior = false; break; }
      if (interior) {
        for (std::size_t a = 0; a < s; ++a) w[a] = sol[a];
        break;
      }
      // Step from w toward sol until the first weight hits zero, drop it.
      double theta = 1.0;
      for (std::size_t a = 0; a < s; ++a) {
        if (sol[a] <= eps_w && w[a] > sol[a]) {
          theta = std::min(theta, w[a] / (w[a] - sol[a]));
        }
      }
      for (std::size_t a = 0; a < s; ++a)
        w[a] = (1.0 - theta) * w[a] + theta * sol[a];
      for (std::size_t a = s; a-- > 0;) {
        if (w[a] <= eps_w) {
          S.erase(S.begin() + static_cast<std::ptrdiff_t>(a));
          w.erase(w.begin() + static_cast<std::ptrdiff_t>(a));
        }
      }
      if (S.empty()) { S = {imin}; w = {1.0}; break; }
    }

    x.setZero();
    for (std::size_t a = 0; a < S.size(); ++a) x += w[a] * q[S[a]];
  }
  return x.norm();
}

bool PolytopeSet::contains(const Vec& y, double tol) const {
  if (empty()) return false;
  require(y.size() == ambient_dim(), ErrorCode::dimension_mismatch,
          "membership query dimension mismatch");
  return distance_to(y) <= tol;
}

Vec PolytopeSet::support_point(const Vec& dir) const {
  require(!empty(), ErrorCode::invalid_argument, "support of empty set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < verts_.size(); ++i) {
    double di = dir.dot(verts_[i]) - dir.dot(verts_[best]);
    if (di > 0 || (di == 0 && lex_less(verts_[best], verts_[i]))) best = i;
  }
  return verts_[best];
}

Vec PolytopeSet::centroid() const {
  require(!empty(), ErrorCode::invalid_argument, "centroid of empty set");
  Vec c = Vec::Zero(ambient_dim());
  for (const auto& v : verts_) c += v;
  return c / static_cast<double>(verts_.size());
}

std::vector<Vec> hull2d_ccw(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec& a, const Vec& b) { return a == b; }),
            pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Vec> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

PolytopeSet PolytopeSet::canonical() const {
  if (empty()) return PolytopeSet();
  std::vector<Vec> pts = verts_;
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec& a, const Vec& b) {
                          return vec_approx_eq(a, b, 1e-13);
                        }),
            pts.end());
  const int d = ambient_dim();
  if (pts.size() <= 1) return PolytopeSet(pts);
  if (d == 1) {
    return PolytopeSet({pts.front(), pts.back()});
  }
  if (d == 2) {
    auto h = hull2d_ccw(pts);
    std::sort(h.begin(), h.end(), lex_less);
    return PolytopeSet(h);
  }
  // Higher ambient dimension: drop points expressible as convex combinations
  // of the others (exact rational test; lists stay desk-scale here).
  std::vector<Vec> keep = pts;
  for (std::size_t i = keep.size(); i-- > 0;) {
    if (keep.size() == 1) break;
    std::vector<Vec> others;
    others.reserve(keep.size() - 1);
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (j != i) others.push_back(keep[j]);
    if (ratlp::membership_program(others, keep[i]).feasible)
      keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(i));
  }
  std::sort(keep.begin(), keep.end(), lex_less);
  return PolytopeSet(keep);
}

namespace {

// Sutherland-Hodgman clip of a convex vertex set against the ccw boundary of
// a full-dimensional convex polygon. Inputs nonempty; result may be empty
// only through floating-point grazing (callers fall back to the exact path).
std::vector<Vec> clip_by_polygon(const std::vector<Vec>& subject_in,
                                 const std::vector<Vec>& clip_ccw) {
  std::vector<Vec> subject = hull2d_ccw(subject_in);
  const double eps = 1e-12;
  const std::size_t m = clip_ccw.size();
  for (std::size_t e = 0; e < m && !subject.empty(); ++e) {
    const Vec& a = clip_ccw[e];
    const Vec& b = clip_ccw[(e + 1) % m];
    const double ex = b[0] - a[0], ey = b[1] - a[1];
    auto side = [&](const Vec& p) {
      return ex * (p[1] - a[1]) - ey * (p[0] - a[0]);
    };
    std::vector<Vec> next;
    const std::size_t s = subject.size();
    for (std::size_t i = 0; i < s; ++i) {
      const Vec& cur = subject[i];
      const Vec& prev = subject[(i + s - 1) % s];
      const double sc = side(cur), sp = side(prev);
      const bool cin = sc >= -eps, pin = sp >= -eps;
      if (pin != cin && std::abs(sp - sc) > 0) {
        double t = sp / (sp - sc);
        next.push_back(prev + t * (cur - prev));
      }
      if (cin) next.push_back(cur);
      if (s == 1) break; // a single point has no edges to cross
    }
    subject = hull2d_ccw(next);
  }
  return subject;
}

double polygon_area2(const std::vector<Vec>& ccw) {
  double a = 0.0;
  const std::size_t n = ccw.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& p = ccw[i];
    const Vec& q = ccw[(i + 1) % n];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return a;
}

} // namespace

PolytopeSet intersect(const PolytopeSet& P, const PolytopeSet& Q) {
  if (P.empty() || Q.empty()) return PolytopeSet();
  require(P.ambient_dim() == Q.ambient_dim(), ErrorCode::dimension_mismatch,
          "intersection of sets in different ambient spaces");
  // Emptiness is the exact verdict of the joint feasibility program.
  auto feas = ratlp::intersection_program(P.vertices(), Q.vertices());
  if (!feas.feasible) return PolytopeSet();

  const int d = P.ambient_dim();
  if (d == 1) {
    double plo = P.vertices()[0][0], phi = plo;
    for (const auto& v : P.vertices()) {
      plo = std::min(plo, v[0]);
      phi = std::max(phi, v[0]);
    }
    double qlo = Q.vertices()[0][0], qhi = qlo;
    for (const auto& v : Q.vertices()) {
      qlo = std::min(qlo, v[0]);
      qhi = std::max(qhi, v[0]);
    }
    return PolytopeSet::interval(std::max(plo, qlo), std::min(phi, qhi));
  }
  if (d == 2) {
    auto ph = hull2d_ccw(P.vertices());
    auto qh = hull2d_ccw(Q.vertices());
    const bool pfull = ph.size() >= 3 && polygon_area2(ph) > 1e-18;
    const bool qfull = qh.size() >= 3 && polygon_area2(qh) > 1e-18;
    std::vector<Vec> got;
    if (qfull) {
      got = clip_by_polygon(ph, qh);
    } else if (pfull) {
      got = clip_by_polygon(qh, ph);
    }
    if (got.empty()) {
      // Degenerate pair or grazing contact: exact enumeration.
      got = ratlp::intersection_vertices(P.vertices(), Q.vertices());
    }
    return PolytopeSet(got).canonical();
  }
  return PolytopeSet(ratlp::intersection_vertices(P.vertices(), Q.vertices()))
      .canonical();
}

PolytopeSet minkowski_ball_sum(const PolytopeSet& P, double r, Norm norm) {
  require(r >= 0, ErrorCode::invalid_argument, "thickening radius must be >= 0");
  if (P.empty()) return PolytopeSet();
  if (r == 0) return P;
  const int d = P.ambient_dim();
  std::vector<Vec> ball;
  if (norm == Norm::linf || d == 1) {
    const int corners = 1 << d;
    for (int mask = 0; mask < corners; ++mask) {
      Vec c(d);
      for (int i = 0; i < d; ++i) c[i] = (mask >> i) & 1 ? r : -r;
      ball.push_back(c);
    }
  } else if (d == 2) {
    for (int j = 0; j < 16; ++j) {
      double a = 2.0 * M_PI * j / 16.0;
      Vec c(2);
      c[0] = r * std::cos(a);
      c[1] = r * std::sin(a);
      ball.push_back(c);
    }
  } else {
    require(d == 3, ErrorCode::invalid_dimension,
            "ball approximation implemented for ambient dimension <= 3");
    for (int i = 0; i < 3; ++i) {
      for (int s = -1; s <= 1; s += 2) {
        Vec c = Vec::Zero(3);
        c[i] = s * r;
        ball.push_back(c);
      }
    }
    const double g = r / std::sqrt(3.0);
    for (int mask = 0; mask < 8; ++mask) {
      Vec c(3);
      for (int i = 0; i < 3; ++i) c[i] = (mask >> i) & 1 ? g : -g;
      ball.push_back(c);
    }
  }
  std::vector<Vec> sum;
  sum.reserve(P.vertex_count() * ball.size());
  for (const auto& v : P.vertices())
    for (const auto& c : ball) sum.push_back(v + c);
  return PolytopeSet(std::move(sum)).canonical();
}

PolytopeSet product(const std::vector<PolytopeSet>& factors) {
  require(!factors.empty(), ErrorCode::invalid_argument,
          "product of zero factors");
  int total = 0;
  for (const auto& f : factors) {
    if (f.empty()) return PolytopeSet();
    total += f.ambient_dim();
  }
  std::vector<Vec> acc{Vec(0)};
  for (const auto& f : factors) {
    std::vector<Vec> next;
    next.reserve(acc.size() * f.vertex_count());
    for (const auto& head : acc) {
      for (const auto& v : f.vertices()) {
        Vec w(head.size() + v.size());
        w.head(head.size()) = head;
        w.tail(v.size()) = v;
        next.push_back(std::move(w));
      }
    }
    acc = std::move(next);
  }
  (void)total;
  return PolytopeSet(std::move(acc));
}

} // namespace corrfix
