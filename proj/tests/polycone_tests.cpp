#include "kltq/polycone.hpp"

#include "kltq/lp.hpp"

#include "doctest.h"

#include <functional>
#include <map>
#include <random>

using namespace kltq;

namespace {

std::vector<IntVec> random_rays(std::mt19937_64& g, int dim, int count, long span) {
  std::vector<IntVec> rays;
  while (static_cast<int>(rays.size()) < count) {
    IntVec v(dim);
    for (int j = 0; j < dim; ++j)
      v[j] = static_cast<long>(g() % (2 * span + 1)) - span;
    if (!is_zero(v)) rays.push_back(primitivize_ray(v));
  }
  return rays;
}

// Independent membership oracle: v in cone(rays) iff some lambda >= 0 with
// sum lambda_i r_i = v (solved by the LP module, not the cone code).
bool member_by_lp(const std::vector<IntVec>& rays, int dim, const IntVec& v) {
  LpProblem p;
  p.nvars = static_cast<int>(rays.size());
  for (int c = 0; c < dim; ++c) {
    RatVec row(p.nvars);
    for (int i = 0; i < p.nvars; ++i) row[i] = Rat(rays[i][c]);
    p.add_eq(std::move(row), Rat(v[c]));
  }
  for (int i = 0; i < p.nvars; ++i) {
    RatVec row(p.nvars, Rat(0));
    row[i] = 1;
    p.add_geq(std::move(row), Rat(0));
  }
  return lp_optimize(p, RatVec(p.nvars, Rat(0)), false).status == LpStatus::Optimal;
}

const std::vector<IntVec> kReferenceRays = {
    {Int(0), Int(0), Int(1)},
    {Int(0), Int(1), Int(2)},
    {Int(1), Int(0), Int(1)},
    {Int(1), Int(1), Int(1)}};

}  // namespace

TEST_CASE("orthant is self-dual and smooth") {
  Cone c = Cone::from_rays(3, {{Int(1), Int(0), Int(0)},
                               {Int(0), Int(1), Int(0)},
                               {Int(0), Int(0), Int(1)}});
  CHECK(c.is_smooth());
  CHECK(dual_cone(c) == c);
  CHECK(c.contains(IntVec{Int(2), Int(3), Int(0)}));
  CHECK(!c.contains(IntVec{Int(-1), Int(0), Int(0)}));
  CHECK(c.contains_relint(RatVec{Rat(1), Rat(1), Rat(1, 7)}));
  CHECK(!c.contains_relint(RatVec{Rat(1), Rat(1), Rat(0)}));
}

TEST_CASE("reference cone dual pair") {
  Cone c = Cone::from_rays(3, kReferenceRays);
  CHECK(c.rays == kReferenceRays);  // already primitive, sorted, extreme
  Cone d = dual_cone(c);
  std::vector<IntVec> expected = {{Int(-1), Int(0), Int(1)},
                                  {Int(0), Int(1), Int(0)},
                                  {Int(1), Int(-2), Int(1)},
                                  {Int(1), Int(0), Int(0)}};
  CHECK(d.rays == expected);
  CHECK(dual_cone(d) == c);
  CHECK(c.is_pointed());
  CHECK(c.is_full_dimensional());
  CHECK(!c.is_smooth());
}

TEST_CASE("duality and membership agree with an LP oracle on random cones") {
  std::mt19937_64 g(33);
  for (int t = 0; t < 25; ++t) {
    int dim = 2 + static_cast<int>(g() % 3);
    auto gens = random_rays(g, dim, dim + 1 + static_cast<int>(g() % 2), 4);
    Cone c = Cone::from_rays(dim, gens);
    CHECK(dual_cone(dual_cone(c)) == c);
    for (const IntVec& r : gens) CHECK(c.contains(r));
    for (int s = 0; s < 6; ++s) {
      IntVec v(dim);
      for (int j = 0; j < dim; ++j)
        v[j] = static_cast<long>(g() % 13) - 6;
      CHECK(c.contains(v) == member_by_lp(gens, dim, v));
    }
  }
}

TEST_CASE("hilbert bases of staircase cones") {
  Cone c = Cone::from_rays(2, {{Int(1), Int(0)}, {Int(1), Int(4)}});
  std::vector<IntVec> hb = hilbert_basis(c);
  std::vector<IntVec> expected = {{Int(1), Int(0)},
                                  {Int(1), Int(1)},
                                  {Int(1), Int(2)},
                                  {Int(1), Int(3)},
                                  {Int(1), Int(4)}};
  CHECK(hb == expected);

  Cone a1 = Cone::from_rays(2, {{Int(1), Int(0)}, {Int(1), Int(2)}});
  CHECK(hilbert_basis(a1).size() == 3);

  // Dual of the reference cone needs one generator beyond its rays.
  Cone d = dual_cone(Cone::from_rays(3, kReferenceRays));
  std::vector<IntVec> dh = hilbert_basis(d);
  CHECK(dh.size() == 5);
  bool has_extra = false;
  for (const IntVec& h : dh)
    if (h == IntVec{Int(0), Int(-1), Int(1)}) has_extra = true;
  CHECK(has_extra);
}

TEST_CASE("hilbert bases generate and are minimal on random cones") {
  std::mt19937_64 g(44);
  for (int t = 0; t < 10; ++t) {
    int dim = 2 + static_cast<int>(g() % 2);
    Cone c = Cone::from_rays(dim, random_rays(g, dim, dim + 1, 3));
    if (!c.is_pointed()) continue;
    auto hb = hilbert_basis(c);
    for (size_t i = 0; i < hb.size(); ++i) {
      CHECK(c.contains(hb[i]));
      for (size_t j = 0; j < hb.size(); ++j) {
        if (i == j) continue;
        IntVec diff(dim);
        for (int k = 0; k < dim; ++k) diff[k] = hb[i][k] - hb[j][k];
        CHECK((is_zero(diff) || !c.contains(diff)));
      }
    }
    // Bounded exhaustive generation check by memoized greedy subtraction.
    std::map<IntVec, bool> memo;
    std::function<bool(const IntVec&)> gen = [&](const IntVec& x) -> bool {
      if (is_zero(x)) return true;
      auto it = memo.find(x);
      if (it != memo.end()) return it->second;
      memo[x] = false;
      bool ok = false;
      for (const IntVec& h : hb) {
        IntVec y(dim);
        for (int k = 0; k < dim; ++k) y[k] = x[k] - h[k];
        if (c.contains(y) && gen(y)) {
          ok = true;
          break;
        }
      }
      memo[x] = ok;
      return ok;
    };
    const long bound = dim == 2 ? 5 : 3;
    std::vector<long> pt(dim, -bound);
    bool done = false;
    while (!done) {
      IntVec v(dim);
      for (int j = 0; j < dim; ++j) v[j] = pt[j];
      if (c.contains(v)) CHECK(gen(v));
      int j = 0;
      for (; j < dim; ++j) {
        if (++pt[j] <= bound) break;
        pt[j] = -bound;
      }
      done = j == dim;
    }
  }
}

TEST_CASE("polyhedra from inequality systems") {
  // Unit square.
  std::vector<RatVec> normals = {{Rat(1), Rat(0)}, {Rat(-1), Rat(0)},
                                 {Rat(0), Rat(1)}, {Rat(0), Rat(-1)}};
  RatVec rhs = {Rat(0), Rat(-1), Rat(0), Rat(-1)};
  Polyhedron sq = Polyhedron::from_ineqs(2, normals, rhs);
  REQUIRE(!sq.empty);
  CHECK(sq.vertices.size() == 4);
  CHECK(sq.tail.rays.empty());
  CHECK(sq.contains(RatVec{Rat(1, 2), Rat(1, 2)}));
  CHECK(!sq.contains(RatVec{Rat(2), Rat(0)}));

  // Infeasible: x >= 1 and x <= 0.
  Polyhedron none = Polyhedron::from_ineqs(1, {{Rat(1)}, {Rat(-1)}}, {Rat(1), Rat(0)});
  CHECK(none.empty);

  // Half-plane has lineality and must be rejected.
  CHECK_THROWS_WITH_AS(Polyhedron::from_ineqs(2, {{Rat(1), Rat(0)}}, {Rat(0)}),
                       doctest::Contains("PolyhedronNotPointed"), Error);
}

TEST_CASE("minkowski sums and support minima") {
  Cone tail = Cone::from_rays(1, {{Int(1)}});
  Polyhedron p = Polyhedron::from_vertices_tail({{Rat(0)}, {Rat(1)}}, tail);
  Polyhedron q = Polyhedron::from_vertices_tail({{Rat(2)}}, tail);
  Polyhedron s = minkowski_sum(p, q);
  REQUIRE(!s.empty);
  CHECK(s.vertices == std::vector<RatVec>{{Rat(2)}});
  CHECK(minkowski_sum(p, Polyhedron::make_empty(1)).empty);

  auto v = support_min(p, {Rat(1)});
  REQUIRE(v.has_value());
  CHECK(*v == 0);
  CHECK(!support_min(p, {Rat(-1)}).has_value());  // unbounded below
  CHECK(vertex_multiplicity({Rat(1, 2), Rat(1, 3)}) == 6);
  CHECK(vertex_multiplicity({Rat(2), Rat(-3)}) == 1);
}
