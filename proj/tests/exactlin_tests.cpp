#include "kltq/exactlin.hpp"

#include "doctest.h"

#include <random>

using namespace kltq;

namespace {

IntMat random_matrix(std::mt19937_64& g, int rows, int cols, long span) {
  IntMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m.at(i, j) = static_cast<long>(g() % (2 * span + 1)) - span;
  return m;
}

Int det_laplace(const IntMat& m) {
  const int n = m.rows;
  if (n == 0) return 1;
  if (n == 1) return m.at(0, 0);
  Int d = 0;
  for (int j = 0; j < n; ++j) {
    IntMat minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c)
        if (c != j) minor.at(r - 1, cc++) = m.at(r, c);
    }
    Int t = m.at(0, j) * det_laplace(minor);
    d += (j % 2 == 0) ? t : -t;
  }
  return d;
}

IntMat random_unimodular(std::mt19937_64& g, int n) {
  IntMat u = IntMat::identity(n);
  for (int s = 0; s < 2 * n + 4; ++s) {
    int i = static_cast<int>(g() % n);
    int j = static_cast<int>(g() % n);
    if (i == j) continue;
    Int f = static_cast<long>(g() % 5) - 2;
    for (int c = 0; c < n; ++c) u.at(i, c) += f * u.at(j, c);
  }
  return u;
}

}  // namespace

TEST_CASE("content and primitivization") {
  CHECK(content({Int(4), Int(-6), Int(10)}) == 2);
  CHECK(content({Int(0), Int(0)}) == 0);
  CHECK(primitivize_ray(IntVec{Int(-4), Int(6)}) == IntVec{Int(-2), Int(3)});
  CHECK(primitivize_line(IntVec{Int(-4), Int(6)}) == IntVec{Int(2), Int(-3)});
  CHECK(primitivize_ray(RatVec{Rat(1, 2), Rat(-1, 3)}) == IntVec{Int(3), Int(-2)});
}

TEST_CASE("hermite normal form is a canonical unimodular echelon") {
  std::mt19937_64 g(101);
  for (int t = 0; t < 40; ++t) {
    int rows = 1 + static_cast<int>(g() % 4);
    int cols = 1 + static_cast<int>(g() % 5);
    IntMat m = random_matrix(g, rows, cols, 9);
    HnfResult h = hermite_normal_form(m);
    CHECK(abs(det_laplace(h.u)) == 1);
    CHECK(mat_mul(h.u, m) == h.h);
    for (size_t p = 0; p < h.pivot_cols.size(); ++p) {
      const Int& piv = h.h.at(static_cast<int>(p), h.pivot_cols[p]);
      CHECK(piv > 0);
      for (size_t q = 0; q < p; ++q) {
        const Int& above = h.h.at(static_cast<int>(q), h.pivot_cols[p]);
        CHECK(above >= 0);
        CHECK(above < piv);
      }
    }
    // Canonicity: invariant under any unimodular row mix, and idempotent.
    CHECK(hermite_normal_form(mat_mul(random_unimodular(g, rows), m)).h == h.h);
    CHECK(hermite_normal_form(h.h).h == h.h);
  }
}

TEST_CASE("smith normal form factors with divisibility chain") {
  std::vector<IntMat> cases = {
      IntMat::from_rows({{Int(2), Int(4)}, {Int(6), Int(8)}}, 2),
      IntMat::from_rows({{Int(2), Int(4)}, {Int(4), Int(8)}}, 2),  // a | b rows
      IntMat::from_rows({{Int(0), Int(0)}, {Int(0), Int(0)}}, 2),
      IntMat::from_rows({{Int(6)}, {Int(10)}, {Int(15)}}, 1),
      IntMat::identity(3)};
  std::mt19937_64 g(202);
  for (int t = 0; t < 30; ++t)
    cases.push_back(random_matrix(g, 1 + static_cast<int>(g() % 4),
                                  1 + static_cast<int>(g() % 4), 12));
  for (const IntMat& m : cases) {
    SnfResult s = smith_normal_form(m);
    CHECK(mat_mul(mat_mul(s.u, m), s.v) == s.d);
    CHECK(mat_mul(s.u, s.u_inv) == IntMat::identity(m.rows));
    for (int i = 0; i < std::min(s.d.rows, s.d.cols); ++i) {
      CHECK(s.d.at(i, i) >= 0);
      if (i > 0 && s.d.at(i, i) != 0)
        CHECK(s.d.at(i, i) % s.d.at(i - 1, i - 1) == 0);
    }
    for (int i = 0; i < s.d.rows; ++i)
      for (int j = 0; j < s.d.cols; ++j)
        if (i != j) CHECK(s.d.at(i, j) == 0);
  }
}

TEST_CASE("saturated kernels") {
  IntMat k = kernel_saturated(IntMat::from_rows({{Int(2), Int(4)}}, 2));
  REQUIRE(k.rows == 1);
  CHECK(primitivize_line(k.row(0)) == IntVec{Int(2), Int(-1)});
  IntMat w = IntMat::from_rows({{Int(2), Int(-1), Int(-1), Int(1)}}, 4);
  IntMat kw = kernel_saturated(w);
  REQUIRE(kw.rows == 3);
  for (int i = 0; i < kw.rows; ++i) CHECK(dot(w.row(0), kw.row(i)) == 0);
  // Saturation: the kernel lattice is its own saturation.
  CHECK(lattice_row_basis(kw) == kernel_saturated(kernel_saturated(kw)));
  CHECK(kernel_saturated(IntMat::identity(3)).rows == 0);
}

TEST_CASE("integer and rational solving") {
  IntMat a = IntMat::from_rows({{Int(2)}}, 1);
  CHECK(!integer_solve(a, {Int(3)}).has_value());
  auto x = integer_solve(a, {Int(4)});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == 2);

  // Inconsistent system yields a checked multiplier certificate.
  std::vector<RatVec> rows = {{Rat(1), Rat(0)}, {Rat(1), Rat(0)}};
  RatVec rhs = {Rat(0), Rat(1)};
  LinSolveResult s = solve_rational(rows, rhs);
  REQUIRE(!s.feasible());
  REQUIRE(s.certificate.has_value());
  RatVec comb(2, Rat(0));
  Rat b = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < 2; ++j) comb[j] += (*s.certificate)[i] * rows[i][j];
    b += (*s.certificate)[i] * rhs[i];
  }
  for (Rat& c : comb) {
    c.canonicalize();
    CHECK(c == 0);
  }
  b.canonicalize();
  CHECK(b != 0);

  // Solvable system: particular plus kernel really parameterizes solutions.
  LinSolveResult t = solve_rational({{Rat(1), Rat(1), Rat(0)}}, {Rat(2)});
  REQUIRE(t.feasible());
  CHECK(t.kernel.size() == 2);
  CHECK(dot(*t.particular, RatVec{Rat(1), Rat(1), Rat(0)}) == 2);
  for (const RatVec& k : t.kernel)
    CHECK(dot(k, RatVec{Rat(1), Rat(1), Rat(0)}) == 0);
}

TEST_CASE("minimal clearing index") {
  ClearingIndex c = minimal_clearing_index(IntMat::identity(2), {Rat(1, 2), Rat(1, 3)});
  CHECK(c.k == 6);
  CHECK(c.witness == IntVec{Int(3), Int(2)});
  ClearingIndex one = minimal_clearing_index(IntMat::identity(1), {Rat(5)});
  CHECK(one.k == 1);
}
