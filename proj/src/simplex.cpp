#include "corrfix/simplex.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace corrfix {

BarycentricPoint::BarycentricPoint(Vec l) : lambda(std::move(l)) {
  require(lambda.size() >= 1, ErrorCode::invalid_dimension,
          "barycentric point needs at least one coordinate");
  double sum = lambda.sum();
  require(std::abs(sum - 1.0) <= 1e-12, ErrorCode::invalid_argument,
          "barycentric coordinates must sum to 1 (got " + fmt_double(sum) + ")");
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    require(lambda[i] >= -1e-12, ErrorCode::invalid_argument,
            "barycentric coordinate " + std::to_string(i) + " is negative");
    if (lambda[i] < 0) lambda[i] = 0;
  }
}

SimplexDomain::SimplexDomain(std::vector<Vec> vertices)
    : verts_(std::move(vertices)) {
  require(!verts_.empty(), ErrorCode::invalid_dimension,
          "simplex needs at least one vertex");
  const int n = static_cast<int>(verts_.size());
  const int d = static_cast<int>(verts_[0].size());
  require(d >= n - 1, ErrorCode::invalid_dimension,
          "ambient dimension too small for vertex count");
  for (const auto& v : verts_) {
    require(static_cast<int>(v.size()) == d, ErrorCode::dimension_mismatch,
            "simplex vertices have mixed dimensions");
  }

  vmat_.resize(d, n);
  for (int j = 0; j < n; ++j) vmat_.col(j) = verts_[static_cast<std::size_t>(j)];

  if (n > 1) {
    Mat edges(d, n - 1);
    for (int j = 1; j < n; ++j) edges.col(j - 1) = verts_[static_cast<std::size_t>(j)] - verts_[0];
    double scale = edges.cwiseAbs().maxCoeff();
    require(scale > 0, ErrorCode::invalid_argument, "degenerate simplex: repeated vertices");
    Eigen::JacobiSVD<Mat> svd(edges / scale);
    const auto& sv = svd.singularValues();
    require(sv[sv.size() - 1] > 1e-10, ErrorCode::invalid_argument,
            "simplex vertices are affinely dependent (min singular value " +
                fmt_double(sv[sv.size() - 1]) + ")");
  }

  Mat sys(d + 1, n);
  sys.topRows(d) = vmat_;
  sys.row(d).setOnes();
  qr_ = std::make_shared<Eigen::ColPivHouseholderQR<Mat>>(sys);
}

Vec SimplexDomain::point_at(const Vec& lambda) const {
  require(lambda.size() == vertex_count(), ErrorCode::dimension_mismatch,
          "coordinate vector length does not match vertex count");
  return vmat_ * lambda;
}

BarycentricPoint SimplexDomain::coordinates(const Vec& p, double tol) const {
  require(p.size() == ambient_dim(), ErrorCode::dimension_mismatch,
          "query point dimension does not match simplex ambient space");
  Vec rhs(ambient_dim() + 1);
  rhs.head(ambient_dim()) = p;
  rhs[ambient_dim()] = 1.0;
  Vec lambda = qr_->solve(rhs);

  // Distance to the affine hull: reconstruction residual of the solve.
  const double affine_resid = (vmat_ * lambda - p).lpNorm<Eigen::Infinity>();
  if (affine_resid > tol) {
    throw OutsideDomainError(
        "point lies off the simplex affine hull (distance " +
            fmt_double(affine_resid) + ")",
        affine_resid);
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    worst = std::min(worst, lambda[i]);
  if (worst < -tol) {
    // Scale the coordinate deficit to a point distance for the report.
    const double dist = -worst * diameter();
    throw OutsideDomainError(
        "point lies outside the simplex hull (coordinate deficit " +
            fmt_double(-worst) + ")",
        dist);
  }
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda[i] < 0) lambda[i] = 0;
  lambda /= lambda.sum();
  return BarycentricPoint(lambda);
}

bool SimplexDomain::contains_point(const Vec& p, double tol) const {
  if (p.size() != ambient_dim()) return false;
  try {
    coordinates(p, tol);
    return true;
  } catch (const OutsideDomainError&) {
    return false;
  }
}

double SimplexDomain::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < verts_.size(); ++i)
    for (std::size_t j = i + 1; j < verts_.size(); ++j)
      d = std::max(d, (verts_[i] - verts_[j]).norm());
  return d;
}

double SimplexDomain::volume() const {
  const int n = vertex_count();
  if (n == 1) return 0.0;
  Mat edges(ambient_dim(), n - 1);
  for (int j = 1; j < n; ++j) edges.col(j - 1) = verts_[static_cast<std::size_t>(j)] - verts_[0];
  Mat gram = edges.transpose() * edges;
  double det = gram.determinant();
  if (det < 0) det = 0;
  double fact = 1.0;
  for (int k = 2; k <= n - 1; ++k) fact *= k;
  return std::sqrt(det) / fact;
}

Vec SimplexDomain::centroid() const {
  Vec c = Vec::Zero(ambient_dim());
  for (const auto& v : verts_) c += v;
  return c / static_cast<double>(verts_.size());
}

SimplexDomain standard_simplex(int n) {
  require(n >= 1, ErrorCode::invalid_dimension,
          "standard simplex needs n >= 1 vertices");
  std::vector<Vec> verts;
  verts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    verts.push_back(e);
  }
  return SimplexDomain(std::move(verts));
}

namespace {

// Staircase test for the scaled Kuhn simplex {m >= u_1 >= ... >= u_k >= 0}.
bool in_staircase(const Eigen::VectorXi& u, int m) {
  int prev = m;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] > prev || u[i] < 0) return false;
    prev = u[i];
  }
  return true;
}

Eigen::VectorXi staircase_to_numerators(const Eigen::VectorXi& u, int n, int m) {
  Eigen::VectorXi k(n);
  k[0] = m - (u.size() > 0 ? u[0] : 0);
  for (int j = 1; j < n - 1; ++j) k[j] = u[j - 1] - u[j];
  if (n > 1) k[n - 1] = u[n - 2];
  return k;
}

} // namespace

std::vector<LatticeCell> kuhn_lattice_cells(int n, int m) {
  require(n >= 1, ErrorCode::invalid_dimension, "vertex count must be >= 1");
  require(m >= 1, ErrorCode::invalid_argument, "mesh order must be >= 1");
  std::vector<LatticeCell> cells;
  const int k = n - 1;
  if (k == 0) {
    LatticeCell c;
    c.numerators.push_back(Eigen::VectorXi::Constant(1, m));
    cells.push_back(std::move(c));
    return cells;
  }

  // Freudenthal cells (base point + permutation path) restricted to the
  // staircase region, which the big simplex maps onto.
  Eigen::VectorXi base = Eigen::VectorXi::Zero(k);
  std::vector<int> perm(static_cast<std::size_t>(k));
  for (;;) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<Eigen::VectorXi> path;
      path.push_back(base);
      bool ok = in_staircase(base, m);
      Eigen::VectorXi u = base;
      for (int step = 0; ok && step < k; ++step) {
        u[perm[static_cast<std::size_t>(step)]] += 1;
        ok = in_staircase(u, m);
        path.push_back(u);
      }
      if (ok) {
        LatticeCell c;
        c.numerators.reserve(path.size());
        for (const auto& uu : path)
          c.numerators.push_back(staircase_to_numerators(uu, n, m));
        cells.push_back(std::move(c));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));

    int i = k - 1;
    while (i >= 0 && base[i] == m - 1) {
      base[i] = 0;
      --i;
    }
    if (i < 0) break;
    base[i] += 1;
  }
  return cells;
}

std::vector<SimplexDomain> kuhn_triangulate(const SimplexDomain& K, int m) {
  const int n = K.vertex_count();
  auto cells = kuhn_lattice_cells(n, m);
  std::vector<SimplexDomain> out;
  out.reserve(cells.size());
  for (const auto& c : cells) {
    std::vector<Vec> verts;
    verts.reserve(c.numerators.size());
    for (const auto& k : c.numerators)
      verts.push_back(K.point_at(lattice_to_lambda(k, m)));
    out.emplace_back(std::move(verts));
  }
  return out;
}

std::vector<Eigen::VectorXi> simplex_lattice(int n, int m) {
  std::vector<Eigen::VectorXi> pts;
  Eigen::VectorXi k = Eigen::VectorXi::Zero(n);
  std::function<void(int, int)> rec = [&](int idx, int left) {
    if (idx == n - 1) {
      k[idx] = left;
      pts.push_back(k);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[idx] = v;
      rec(idx + 1, left - v);
    }
  };
  rec(0, m);
  return pts;
}

Vec lattice_to_lambda(const Eigen::VectorXi& k, int m) {
  Vec l(k.size());
  for (Eigen::Index i = 0; i < k.size(); ++i)
    l[i] = static_cast<double>(k[i]) / static_cast<double>(m);
  return l;
}

} // namespace corrfix
