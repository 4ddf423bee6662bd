#include "kltq/exactlin.hpp"

#include <algorithm>
#include <cassert>

namespace kltq {

IntMat IntMat::from_rows(const std::vector<IntVec>& rs, int cols) {
  IntMat m(static_cast<int>(rs.size()), cols);
  for (int i = 0; i < m.rows; ++i) {
    if (static_cast<int>(rs[i].size()) != cols)
      throw Error("ShapeMismatch", "row length does not match column count");
    for (int j = 0; j < cols; ++j) m.at(i, j) = rs[i][j];
  }
  return m;
}

IntMat IntMat::identity(int n) {
  IntMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMat IntMat::transposed() const {
  IntMat t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  return t;
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
  if (a.cols != b.rows) throw Error("ShapeMismatch", "mat_mul dimension mismatch");
  IntMat c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const Int& aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

IntVec mat_vec(const IntMat& a, const IntVec& x) {
  if (a.cols != static_cast<int>(x.size()))
    throw Error("ShapeMismatch", "mat_vec dimension mismatch");
  IntVec y(a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) y[i] += a.at(i, j) * x[j];
  return y;
}

Int dot(const IntVec& a, const IntVec& b) {
  assert(a.size() == b.size());
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat dot(const RatVec& a, const RatVec& b) {
  assert(a.size() == b.size());
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat dot(const RatVec& a, const IntVec& b) {
  assert(a.size() == b.size());
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
  return s;
}

Int content(const IntVec& v) {
  Int g = 0;
  for (const Int& x : v) g = gcd(g, x);
  return abs(g);
}

bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

IntVec primitivize_ray(const IntVec& v) {
  Int g = content(v);
  if (g == 0 || g == 1) return v;
  IntVec w(v.size());
  for (size_t i = 0; i < v.size(); ++i) w[i] = v[i] / g;
  return w;
}

IntVec primitivize_line(const IntVec& v) {
  IntVec w = primitivize_ray(v);
  for (const Int& x : w) {
    if (x > 0) return w;
    if (x < 0) {
      for (Int& y : w) y = -y;
      return w;
    }
  }
  return w;
}

IntVec primitivize_ray(const RatVec& v) {
  Int l = lcm_denominators(v);
  IntVec w(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Rat x = v[i] * Rat(l);
    x.canonicalize();
    assert(x.get_den() == 1);
    w[i] = x.get_num();
  }
  return primitivize_ray(w);
}

Int lcm_denominators(const RatVec& v) {
  Int l = 1;
  for (const Rat& x : v) l = lcm(l, x.get_den());
  return l;
}

RatVec to_rat(const IntVec& v) {
  RatVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

namespace {

// Row op helpers operating simultaneously on a matrix and its transform.
void swap_rows(IntMat& m, int i, int j) {
  for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
}

void add_multiple(IntMat& m, int dst, int src, const Int& f) {
  if (f == 0) return;
  for (int c = 0; c < m.cols; ++c) m.at(dst, c) += f * m.at(src, c);
}

void negate_row(IntMat& m, int i) {
  for (int c = 0; c < m.cols; ++c) m.at(i, c) = -m.at(i, c);
}

// Combine rows i and j of (m, u) so that m.at(i, col) = gcd and m.at(j, col) = 0.
void gcd_rows(IntMat& m, IntMat& u, int i, int j, int col) {
  const Int a = m.at(i, col);
  const Int b = m.at(j, col);
  if (b == 0) return;
  if (a == 0) {
    swap_rows(m, i, j);
    swap_rows(u, i, j);
    return;
  }
  if (b % a == 0) {
    // Plain elimination when possible; gcdext may pick a transform that
    // swaps the roles of the rows and loses progress guarantees.
    Int f = -(b / a);
    add_multiple(m, j, i, f);
    add_multiple(u, j, i, f);
    return;
  }
  Int g, p, q;
  mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Int ag = a / g, bg = b / g;
  // (row_i, row_j) <- (p*row_i + q*row_j, -bg*row_i + ag*row_j); det = p*ag+q*bg = 1.
  for (int c = 0; c < m.cols; ++c) {
    Int ri = m.at(i, c), rj = m.at(j, c);
    m.at(i, c) = p * ri + q * rj;
    m.at(j, c) = ag * rj - bg * ri;
  }
  for (int c = 0; c < u.cols; ++c) {
    Int ri = u.at(i, c), rj = u.at(j, c);
    u.at(i, c) = p * ri + q * rj;
    u.at(j, c) = ag * rj - bg * ri;
  }
}

}  // namespace

HnfResult hermite_normal_form(const IntMat& m) {
  IntMat h = m;
  IntMat u = IntMat::identity(m.rows);
  std::vector<int> pivots;
  int r = 0;
  for (int col = 0; col < m.cols && r < m.rows; ++col) {
    for (int i = r + 1; i < m.rows; ++i) gcd_rows(h, u, r, i, col);
    if (h.at(r, col) == 0) continue;
    if (h.at(r, col) < 0) {
      negate_row(h, r);
      negate_row(u, r);
    }
    // Reduce the rows above into [0, pivot).
    for (int i = 0; i < r; ++i) {
      Int f;
      mpz_fdiv_q(f.get_mpz_t(), h.at(i, col).get_mpz_t(), h.at(r, col).get_mpz_t());
      add_multiple(h, i, r, -f);
      add_multiple(u, i, r, -f);
    }
    pivots.push_back(col);
    ++r;
  }
  return {std::move(h), std::move(u), std::move(pivots)};
}

SnfResult smith_normal_form(const IntMat& m) {
  IntMat d = m;
  IntMat u = IntMat::identity(m.rows);
  IntMat uinv = IntMat::identity(m.rows);
  IntMat v = IntMat::identity(m.cols);

  auto gcd_rows_tracked = [&](int i, int j, int col) {
    const Int a = d.at(i, col), b = d.at(j, col);
    if (b == 0) return;
    if (a == 0) {
      swap_rows(d, i, j);
      swap_rows(u, i, j);
      // inverse of a swap is the same swap, applied on columns of uinv
      for (int r2 = 0; r2 < uinv.rows; ++r2) std::swap(uinv.at(r2, i), uinv.at(r2, j));
      return;
    }
    if (b % a == 0) {
      Int f = -(b / a);
      add_multiple(d, j, i, f);
      add_multiple(u, j, i, f);
      // row_j += f*row_i inverts to column_i -= f*column_j on uinv.
      for (int r2 = 0; r2 < uinv.rows; ++r2) uinv.at(r2, i) -= f * uinv.at(r2, j);
      return;
    }
    Int g, p, q;
    mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    Int ag = a / g, bg = b / g;
    for (int c = 0; c < d.cols; ++c) {
      Int ri = d.at(i, c), rj = d.at(j, c);
      d.at(i, c) = p * ri + q * rj;
      d.at(j, c) = ag * rj - bg * ri;
    }
    for (int c = 0; c < u.cols; ++c) {
      Int ri = u.at(i, c), rj = u.at(j, c);
      u.at(i, c) = p * ri + q * rj;
      u.at(j, c) = ag * rj - bg * ri;
    }
    // uinv <- uinv * T^{-1}, T = [[p, q], [-bg, ag]] acting on rows (i, j).
    // T^{-1} = [[ag, -q], [bg, p]] (det T = 1).
    for (int r2 = 0; r2 < uinv.rows; ++r2) {
      Int ci = uinv.at(r2, i), cj = uinv.at(r2, j);
      uinv.at(r2, i) = ci * ag + cj * bg;
      uinv.at(r2, j) = -ci * q + cj * p;
    }
  };
  auto gcd_cols_tracked = [&](int i, int j, int row) {
    const Int a = d.at(row, i), b = d.at(row, j);
    if (b == 0) return;
    if (a == 0) {
      for (int r2 = 0; r2 < d.rows; ++r2) std::swap(d.at(r2, i), d.at(r2, j));
      for (int r2 = 0; r2 < v.rows; ++r2) std::swap(v.at(r2, i), v.at(r2, j));
      return;
    }
    if (b % a == 0) {
      Int f = -(b / a);
      for (int r2 = 0; r2 < d.rows; ++r2) d.at(r2, j) += f * d.at(r2, i);
      for (int r2 = 0; r2 < v.rows; ++r2) v.at(r2, j) += f * v.at(r2, i);
      return;
    }
    Int g, p, q;
    mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    Int ag = a / g, bg = b / g;
    for (int r2 = 0; r2 < d.rows; ++r2) {
      Int ci = d.at(r2, i), cj = d.at(r2, j);
      d.at(r2, i) = p * ci + q * cj;
      d.at(r2, j) = ag * cj - bg * ci;
    }
    for (int r2 = 0; r2 < v.rows; ++r2) {
      Int ci = v.at(r2, i), cj = v.at(r2, j);
      v.at(r2, i) = p * ci + q * cj;
      v.at(r2, j) = ag * cj - bg * ci;
    }
  };

  int n = std::min(d.rows, d.cols);
  for (int t = 0; t < n; ++t) {
    // Move a nonzero entry to (t, t).
    int pi = -1, pj = -1;
    for (int i = t; i < d.rows && pi < 0; ++i)
      for (int j = t; j < d.cols; ++j)
        if (d.at(i, j) != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;
    if (pi != t) {
      swap_rows(d, t, pi);
      swap_rows(u, t, pi);
      for (int r2 = 0; r2 < uinv.rows; ++r2) std::swap(uinv.at(r2, t), uinv.at(r2, pi));
    }
    if (pj != t) {
      for (int r2 = 0; r2 < d.rows; ++r2) std::swap(d.at(r2, t), d.at(r2, pj));
      for (int r2 = 0; r2 < v.rows; ++r2) std::swap(v.at(r2, t), v.at(r2, pj));
    }
    bool again = true;
    while (again) {
      for (int i = t + 1; i < d.rows; ++i) gcd_rows_tracked(t, i, t);
      for (int j = t + 1; j < d.cols; ++j) gcd_cols_tracked(t, j, t);
      again = false;
      for (int i = t + 1; i < d.rows && !again; ++i)
        if (d.at(i, t) != 0) again = true;
    }
    if (d.at(t, t) < 0) {
      negate_row(d, t);
      negate_row(u, t);
      for (int r2 = 0; r2 < uinv.rows; ++r2) uinv.at(r2, t) = -uinv.at(r2, t);
    }
    // Enforce divisibility of the remaining block by the pivot.
    bool redo = false;
    for (int i = t + 1; i < d.rows && !redo; ++i)
      for (int j = t + 1; j < d.cols; ++j)
        if (d.at(i, j) % d.at(t, t) != 0) {
          add_multiple(d, t, i, 1);
          add_multiple(u, t, i, 1);
          for (int r2 = 0; r2 < uinv.rows; ++r2) uinv.at(r2, i) -= uinv.at(r2, t);
          redo = true;
          break;
        }
    if (redo) --t;  // re-run the pivot step
  }
  return {std::move(d), std::move(u), std::move(v), std::move(uinv)};
}

std::vector<Int> SnfResult::invariant_factors() const {
  std::vector<Int> f;
  int n = std::min(d.rows, d.cols);
  for (int i = 0; i < n; ++i)
    if (d.at(i, i) != 0) f.push_back(d.at(i, i));
  return f;
}

IntMat kernel_saturated(const IntMat& m) {
  // Row-HNF of m^T: zero rows of H correspond to rows of U spanning the kernel.
  HnfResult r = hermite_normal_form(m.transposed());
  std::vector<IntVec> basis;
  for (int i = 0; i < r.h.rows; ++i) {
    bool zero = true;
    for (int j = 0; j < r.h.cols; ++j)
      if (r.h.at(i, j) != 0) {
        zero = false;
        break;
      }
    if (zero) basis.push_back(r.u.row(i));
  }
  IntMat k = IntMat::from_rows(basis, m.cols);
  // Canonical basis: HNF rows.
  return lattice_row_basis(k);
}

IntMat lattice_row_basis(const IntMat& m) {
  if (m.rows == 0) return IntMat(0, m.cols);
  HnfResult r = hermite_normal_form(m);
  std::vector<IntVec> rows;
  for (int i = 0; i < r.h.rows; ++i)
    if (!is_zero(r.h.row(i))) rows.push_back(r.h.row(i));
  return IntMat::from_rows(rows, m.cols);
}

std::optional<IntVec> integer_solve(const IntMat& a, const IntVec& b) {
  if (a.rows != static_cast<int>(b.size()))
    throw Error("ShapeMismatch", "integer_solve dimension mismatch");
  // Column echelon: C = A*V via row-HNF of A^T (H = U A^T, so C = H^T, V = U^T).
  HnfResult r = hermite_normal_form(a.transposed());
  // Solve H^T y = b; y indexed by rows of H (pivot rows only, others zero).
  IntVec y(r.h.rows, Int(0));
  IntVec res = b;
  for (size_t p = 0; p < r.pivot_cols.size(); ++p) {
    int prow = r.pivot_cols[p];  // row index in b
    const Int& piv = r.h.at(static_cast<int>(p), prow);
    if (res[prow] % piv != 0) return std::nullopt;
    Int yi = res[prow] / piv;
    y[p] = yi;
    if (yi != 0)
      for (int j = 0; j < r.h.cols; ++j) res[j] -= yi * r.h.at(static_cast<int>(p), j);
  }
  if (!is_zero(res)) return std::nullopt;
  // x = V y = U^T y.
  IntVec x(a.cols, Int(0));
  for (int i = 0; i < r.u.rows; ++i)
    if (y[i] != 0)
      for (int j = 0; j < r.u.cols; ++j) x[j] += y[i] * r.u.at(i, j);
  return x;
}

LinSolveResult solve_rational(const std::vector<RatVec>& a, const RatVec& b) {
  const int m = static_cast<int>(a.size());
  if (m != static_cast<int>(b.size()))
    throw Error("ShapeMismatch", "solve_rational dimension mismatch");
  const int n = m > 0 ? static_cast<int>(a[0].size()) : 0;
  // Work on [A | b | I]; the identity block tracks row multipliers.
  std::vector<RatVec> t(m, RatVec(n + 1 + m, Rat(0)));
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(a[i].size()) != n)
      throw Error("ShapeMismatch", "ragged matrix");
    for (int j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n] = b[i];
    t[i][n + 1 + i] = 1;
  }
  std::vector<int> pivot_col_of_row;
  std::vector<int> pivot_row_of_col(n, -1);
  int r = 0;
  for (int col = 0; col < n && r < m; ++col) {
    int p = -1;
    for (int i = r; i < m; ++i)
      if (t[i][col] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(t[r], t[p]);
    Rat inv = 1 / t[r][col];
    for (int j = 0; j < n + 1 + m; ++j) t[r][j] *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == r || t[i][col] == 0) continue;
      Rat f = t[i][col];
      for (int j = 0; j < n + 1 + m; ++j) t[i][j] -= f * t[r][j];
    }
    pivot_col_of_row.push_back(col);
    pivot_row_of_col[col] = r;
    ++r;
  }
  // Inconsistent row: 0 = nonzero; multiplier block is the certificate.
  for (int i = r; i < m; ++i) {
    if (t[i][n] != 0) {
      LinSolveResult res;
      RatVec lam(m);
      for (int j = 0; j < m; ++j) lam[j] = t[i][n + 1 + j];
      res.certificate = std::move(lam);
      return res;
    }
  }
  LinSolveResult res;
  RatVec x(n, Rat(0));
  for (int i = 0; i < r; ++i) x[pivot_col_of_row[i]] = t[i][n];
  res.particular = std::move(x);
  for (int col = 0; col < n; ++col) {
    if (pivot_row_of_col[col] >= 0) continue;
    RatVec k(n, Rat(0));
    k[col] = 1;
    for (int i = 0; i < r; ++i) k[pivot_col_of_row[i]] = -t[i][col];
    res.kernel.push_back(std::move(k));
  }
  return res;
}

LinSolveResult solve_rational(const IntMat& a, const RatVec& b) {
  std::vector<RatVec> rows(a.rows);
  for (int i = 0; i < a.rows; ++i) rows[i] = to_rat(a.row(i));
  return solve_rational(rows, b);
}

ClearingIndex minimal_clearing_index(const IntMat& a, const RatVec& w) {
  if (a.rows != static_cast<int>(w.size()))
    throw Error("ShapeMismatch", "minimal_clearing_index dimension mismatch");
  // Lattice generated by the columns of A, as rows of the HNF basis.
  IntMat basis = lattice_row_basis(a.transposed());
  // Express w in that basis; the lcm of the coordinate denominators is minimal.
  std::vector<RatVec> cols(a.rows, RatVec(basis.rows, Rat(0)));
  for (int i = 0; i < basis.rows; ++i)
    for (int j = 0; j < a.rows; ++j) cols[j][i] = Rat(basis.at(i, j));
  LinSolveResult s = solve_rational(cols, w);
  if (!s.feasible())
    throw Error("NotInSpan", "vector is not in the rational span of the columns");
  Int k = lcm_denominators(*s.particular);
  RatVec kw(w.size());
  for (size_t i = 0; i < w.size(); ++i) kw[i] = w[i] * Rat(k);
  IntVec kwi(w.size());
  for (size_t i = 0; i < w.size(); ++i) {
    Rat x = kw[i];
    x.canonicalize();
    assert(x.get_den() == 1);
    kwi[i] = x.get_num();
  }
  auto x = integer_solve(a, kwi);
  if (!x) throw Error("Internal", "clearing index witness must exist");
  return {k, *x};
}

}  // namespace kltq
