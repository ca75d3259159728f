#include "corrfix/ratlp.hpp"

#include <algorithm>
#include <cassert>

namespace corrfix::ratlp {

Rat rat_from_double(double x) { return Rat(x); }

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

std::string rat_to_string(const Rat& r) { return r.str(); }

namespace {

struct Tableau {
  // rows 0..m-1: constraints; row m: reduced costs. Column n+m holds rhs.
  RatMat t;
  std::vector<int> basis; // basis[i] = column basic in row i
  int m = 0, n = 0;

  Rat& at(int i, int j) { return t[i][j]; }

  void pivot(int pr, int pc) {
    const Rat piv = t[pr][pc];
    for (auto& v : t[pr]) v /= piv;
    for (int i = 0; i <= m; ++i) {
      if (i == pr) continue;
      const Rat f = t[i][pc];
      if (f == 0) continue;
      for (int j = 0; j <= n + m; ++j) t[i][j] -= f * t[pr][j];
    }
    basis[pr] = pc;
  }
};

} // namespace

Feasibility feasibility(RatMat A, RatVec b) {
  const int m = static_cast<int>(A.size());
  const int n = m ? static_cast<int>(A[0].size()) : 0;
  // Track original row signs so the Farkas vector applies to the inputs.
  std::vector<int> sign(m, 1);
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0) {
      sign[i] = -1;
      b[i] = -b[i];
      for (auto& v : A[i]) v = -v;
    }
  }

  Tableau tb;
  tb.m = m;
  tb.n = n;
  tb.t.assign(m + 1, RatVec(n + m + 1, Rat(0)));
  tb.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) tb.t[i][j] = A[i][j];
    tb.t[i][n + i] = 1;
    tb.t[i][n + m] = b[i];
    tb.basis[i] = n + i;
  }
  // Phase-I objective (sum of artificials) expressed in the nonbasic columns.
  for (int j = 0; j < n; ++j) {
    Rat s(0);
    for (int i = 0; i < m; ++i) s += A[i][j];
    tb.t[m][j] = -s;
  }
  {
    Rat s(0);
    for (int i = 0; i < m; ++i) s += b[i];
    tb.t[m][n + m] = -s;
  }

  for (;;) {
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (tb.t[m][j] < 0) { enter = j; break; } // Bland: lowest index
    }
    if (enter < 0) break;
    int leave = -1;
    Rat best;
    for (int i = 0; i < m; ++i) {
      if (tb.t[i][enter] <= 0) continue;
      Rat ratio = tb.t[i][n + m] / tb.t[i][enter];
      if (leave < 0 || ratio < best ||
          (ratio == best && tb.basis[i] < tb.basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) break; // phase-I objective is bounded; defensive only
    tb.pivot(leave, enter);
  }

  Feasibility out;
  const Rat objective = -tb.t[m][n + m];
  if (objective == 0) {
    out.feasible = true;
    out.point.assign(n, Rat(0));
    for (int i = 0; i < m; ++i) {
      if (tb.basis[i] < n) out.point[tb.basis[i]] = tb.t[i][n + m];
    }
    return out;
  }
  // Dual prices from the artificial columns give the Farkas vector.
  out.feasible = false;
  out.farkas.assign(m, Rat(0));
  for (int i = 0; i < m; ++i) {
    Rat y = Rat(1) - tb.t[m][n + i];
    out.farkas[i] = sign[i] * y;
  }
  // Re-verify exactly against the sign-fixed system mapped back to inputs.
  Rat ub(0);
  for (int i = 0; i < m; ++i) ub += out.farkas[i] * (sign[i] * b[i]);
  assert(ub > 0);
  for (int j = 0; j < n; ++j) {
    Rat s(0);
    for (int i = 0; i < m; ++i) s += out.farkas[i] * (sign[i] * A[i][j]);
    assert(s <= 0);
    (void)s;
  }
  (void)ub;
  return out;
}

namespace {

// Row-reduce [A|b]; returns false when a row reads 0 = nonzero.
bool rref(RatMat& A, RatVec& b, int& rank) {
  const int m = static_cast<int>(A.size());
  const int n = m ? static_cast<int>(A[0].size()) : 0;
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int piv = -1;
    for (int i = row; i < m; ++i) {
      if (A[i][col] != 0) { piv = i; break; }
    }
    if (piv < 0) continue;
    std::swap(A[piv], A[row]);
    std::swap(b[piv], b[row]);
    const Rat p = A[row][col];
    for (auto& v : A[row]) v /= p;
    b[row] /= p;
    for (int i = 0; i < m; ++i) {
      if (i == row || A[i][col] == 0) continue;
      const Rat f = A[i][col];
      for (int j = 0; j < n; ++j) A[i][j] -= f * A[row][j];
      b[i] -= f * b[row];
    }
    ++row;
  }
  for (int i = row; i < m; ++i) {
    if (b[i] != 0) return false;
  }
  rank = row;
  return true;
}

bool solve_square(const RatMat& M, const RatVec& rhs, RatVec& x) {
  const int k = static_cast<int>(M.size());
  RatMat a = M;
  RatVec b = rhs;
  x.assign(k, Rat(0));
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  for (int col = 0; col < k; ++col) {
    int piv = -1;
    for (int i = col; i < k; ++i) {
      if (a[i][col] != 0) { piv = i; break; }
    }
    if (piv < 0) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int i = col + 1; i < k; ++i) {
      if (a[i][col] == 0) continue;
      const Rat f = a[i][col] / a[col][col];
      for (int j = col; j < k; ++j) a[i][j] -= f * a[col][j];
      b[i] -= f * b[col];
    }
  }
  for (int i = k - 1; i >= 0; --i) {
    Rat s = b[i];
    for (int j = i + 1; j < k; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return true;
}

} // namespace

std::vector<RatVec> basic_feasible_points(const RatMat& A0, const RatVec& b0) {
  RatMat A = A0;
  RatVec b = b0;
  int rank = 0;
  std::vector<RatVec> out;
  if (!rref(A, b, rank)) return out;
  const int n = A.empty() ? 0 : static_cast<int>(A[0].size());
  A.resize(rank);
  b.resize(rank);
  if (rank == 0) {
    out.push_back(RatVec(n, Rat(0)));
    return out;
  }

  std::vector<int> idx(rank);
  for (int i = 0; i < rank; ++i) idx[i] = i;
  // Enumerate rank-subsets of columns in lexicographic order.
  std::vector<int> cols(rank);
  for (int i = 0; i < rank; ++i) cols[i] = i;
  auto advance = [&]() -> bool {
    int i = rank - 1;
    while (i >= 0 && cols[i] == n - rank + i) --i;
    if (i < 0) return false;
    ++cols[i];
    for (int j = i + 1; j < rank; ++j) cols[j] = cols[j - 1] + 1;
    return true;
  };
  if (n < rank) return out;
  do {
    RatMat M(rank, RatVec(rank));
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) M[i][j] = A[i][cols[j]];
    RatVec xs;
    if (!solve_square(M, b, xs)) continue;
    bool nonneg = true;
    for (const auto& v : xs) {
      if (v < 0) { nonneg = false; break; }
    }
    if (!nonneg) continue;
    RatVec z(n, Rat(0));
    for (int j = 0; j < rank; ++j) z[cols[j]] = xs[j];
    if (std::find(out.begin(), out.end(), z) == out.end()) out.push_back(z);
  } while (advance());
  return out;
}

Feasibility membership_program(const std::vector<Vec>& verts, const Vec& y) {
  require(!verts.empty(), ErrorCode::invalid_argument,
          "membership program over empty vertex list");
  const int c = static_cast<int>(y.size());
  const int p = static_cast<int>(verts.size());
  RatMat A(c + 1, RatVec(p));
  RatVec b(c + 1);
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < p; ++j) A[i][j] = rat_from_double(verts[j][i]);
    b[i] = rat_from_double(y[i]);
  }
  for (int j = 0; j < p; ++j) A[c][j] = 1;
  b[c] = 1;
  return feasibility(std::move(A), std::move(b));
}

Feasibility intersection_program(const std::vector<Vec>& P,
                                 const std::vector<Vec>& Q) {
  require(!P.empty() && !Q.empty(), ErrorCode::invalid_argument,
          "intersection program needs nonempty vertex lists");
  const int c = static_cast<int>(P[0].size());
  const int p = static_cast<int>(P.size());
  const int q = static_cast<int>(Q.size());
  RatMat A(c + 2, RatVec(p + q, Rat(0)));
  RatVec b(c + 2, Rat(0));
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < p; ++j) A[i][j] = rat_from_double(P[j][i]);
    for (int j = 0; j < q; ++j) A[i][p + j] = -rat_from_double(Q[j][i]);
  }
  for (int j = 0; j < p; ++j) A[c][j] = 1;
  b[c] = 1;
  for (int j = 0; j < q; ++j) A[c + 1][p + j] = 1;
  b[c + 1] = 1;
  return feasibility(std::move(A), std::move(b));
}

std::vector<Vec> intersection_vertices(const std::vector<Vec>& P,
                                       const std::vector<Vec>& Q) {
  std::vector<Vec> out;
  if (P.empty() || Q.empty()) return out;
  const int c = static_cast<int>(P[0].size());
  const int p = static_cast<int>(P.size());
  const int q = static_cast<int>(Q.size());
  RatMat A(c + 2, RatVec(p + q, Rat(0)));
  RatVec b(c + 2, Rat(0));
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < p; ++j) A[i][j] = rat_from_double(P[j][i]);
    for (int j = 0; j < q; ++j) A[i][p + j] = -rat_from_double(Q[j][i]);
  }
  for (int j = 0; j < p; ++j) A[c][j] = 1;
  b[c] = 1;
  for (int j = 0; j < q; ++j) A[c + 1][p + j] = 1;
  b[c + 1] = 1;

  std::vector<RatVec> basics = basic_feasible_points(A, b);
  std::vector<RatVec> images;
  for (const auto& z : basics) {
    RatVec x(c, Rat(0));
    for (int i = 0; i < c; ++i) {
      for (int j = 0; j < p; ++j) x[i] += z[j] * rat_from_double(P[j][i]);
    }
    if (std::find(images.begin(), images.end(), x) == images.end())
      images.push_back(x);
  }
  for (const auto& x : images) {
    Vec v(c);
    for (int i = 0; i < c; ++i) v[i] = rat_to_double(x[i]);
    out.push_back(v);
  }
  return out;
}

std::string token(const Feasibility& f) {
  std::string s = f.feasible ? "feasible:" : "infeasible-farkas:";
  const RatVec& v = f.feasible ? f.point : f.farkas;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += rat_to_string(v[i]);
  }
  return s;
}

} // namespace corrfix::ratlp
