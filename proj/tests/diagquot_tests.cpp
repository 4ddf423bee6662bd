#include "kltq/diagquot.hpp"

#include "doctest.h"

using namespace kltq;

namespace {

WeightAction flagship() {
  WeightAction a;
  a.n = 4;
  a.torus_weights = IntMat::from_rows({{Int(2), Int(-1), Int(-1), Int(1)}}, 4);
  return a;
}

}  // namespace

TEST_CASE("invariant monoid of the flagship torus action") {
  auto gens = invariant_monoid(flagship());
  std::vector<IntVec> expected = {
      {Int(0), Int(0), Int(1), Int(1)},
      {Int(0), Int(1), Int(0), Int(1)},
      {Int(1), Int(0), Int(2), Int(0)},
      {Int(1), Int(1), Int(1), Int(0)},
      {Int(1), Int(2), Int(0), Int(0)}};
  CHECK(gens == expected);
}

TEST_CASE("invariant monoid of the order-2 sign action") {
  WeightAction a;
  a.n = 2;
  a.torus_weights = IntMat(0, 2);
  a.finite_factors.push_back({Int(2), {Int(1), Int(1)}});
  auto gens = invariant_monoid(a);
  std::vector<IntVec> expected = {
      {Int(0), Int(2)}, {Int(1), Int(1)}, {Int(2), Int(0)}};
  CHECK(gens == expected);
  // The quotient is the quadric cone.
  QuotientPresentation p = quotient_presentation(a);
  CHECK(p.quotient.lattice_rank == 2);
  CHECK(p.quotient.sigma.rays.size() == 2);
  CHECK(!p.quotient.sigma.is_smooth());
}

TEST_CASE("flagship presentation and coordinate divisors") {
  QuotientPresentation p = quotient_presentation(flagship());
  CHECK(p.quotient.lattice_rank == 3);
  CHECK(p.quotient.sigma.rays.size() == 4);
  // Every generator char pairs nonnegatively with every ray.
  for (const IntVec& c : p.generator_chars)
    for (const IntVec& r : p.quotient.sigma.rays) CHECK(dot(c, r) >= 0);
  // x1 appears in generators 2,3,4 only; its divisor lands on one ray with
  // multiplicity 1, and every coordinate divisor is matched.
  REQUIRE(p.coordinate_divisor_map.size() == 4);
  for (const auto& e : p.coordinate_divisor_map) {
    REQUIRE(e.has_value());
    CHECK(e->second == 1);
  }
  const auto& [ray_idx, mult] = *p.coordinate_divisor_map[0];
  for (size_t k = 0; k < p.invariant_generators.size(); ++k) {
    bool uses_x1 = p.invariant_generators[k][0] > 0;
    CHECK((dot(p.generator_chars[k], p.quotient.sigma.rays[ray_idx]) > 0) == uses_x1);
  }
}

TEST_CASE("binomial relations") {
  QuotientPresentation p = quotient_presentation(flagship());
  // (x2 x4)(x1 x3^2) = (x3 x4)(x1 x2 x3) and a deliberately false relation.
  std::vector<BinomialRelation> rels = {{{1, 2}, {0, 3}}, {{0, 0}, {4}}};
  auto out = verify_binomial_relations(p, rels);
  CHECK(out == std::vector<bool>{true, false});
  CHECK_THROWS_WITH_AS(verify_binomial_relations(p, {{{9}, {0}}}),
                       doctest::Contains("BadGeneratorIndex"), Error);
}

TEST_CASE("finite quotient by the sign sublattice of the plane") {
  LatticeRefinement ref;
  ref.sub_basis = IntMat::from_rows({{Int(1), Int(1)}, {Int(1), Int(-1)}}, 2);
  CHECK(ref.index() == 2);
  ToricAffine plane = ToricAffine::make(2, {{Int(1), Int(0)}, {Int(0), Int(1)}});
  CartierWitness w{{Rat(-1), Rat(-1)}, Int(1)};
  FiniteQuotientResult fq = finite_quotient(ref, plane, {}, w);
  CHECK(fq.downstairs.sigma.rays ==
        std::vector<IntVec>{{Int(1), Int(-1)}, {Int(1), Int(1)}});
  CHECK(fq.boundary.empty());  // unramified rays keep coefficient 0
  CHECK(fq.ramification == std::vector<Int>{Int(1), Int(1)});
  REQUIRE(fq.witness.has_value());
  CHECK(fq.witness->m == RatVec{Rat(-1), Rat(0)});
  CHECK(fq.witness->cartier_index == 1);

  auto checks = riemann_hurwitz_check(ref, plane, {}, w, {{Int(1), Int(0)}});
  REQUIRE(checks.size() == 1);
  CHECK(checks[0].ok);
  CHECK(checks[0].r == 2);
  CHECK(checks[0].downstairs_value == 2);
  CHECK(checks[0].upstairs_value == 2);
}

TEST_CASE("finite quotient boundary transformation") {
  // Index-2 refinement along the x-axis: upstairs ray (1,0) maps to (2,0).
  LatticeRefinement ref;
  ref.sub_basis = IntMat::from_rows({{Int(2), Int(0)}, {Int(0), Int(1)}}, 2);
  ToricAffine plane = ToricAffine::make(2, {{Int(1), Int(0)}, {Int(0), Int(1)}});
  CartierWitness w{{Rat(-1), Rat(-1)}, Int(1)};
  int up_x = plane.sigma.rays[0] == IntVec{Int(1), Int(0)} ? 0 : 1;  // ramified
  int up_y = 1 - up_x;                                               // unramified
  // Put coefficient 1/2 on the unramified ray only.
  FiniteQuotientResult fq = finite_quotient(ref, plane, {{up_y, Rat(1, 2)}}, w);
  int down_x = fq.downstairs.sigma.rays[0] == IntVec{Int(1), Int(0)} ? 0 : 1;
  int down_y = 1 - down_x;
  CHECK(fq.ramification[down_x] == 2);
  CHECK(fq.ramification[down_y] == 1);
  // Ramified ray picks up b' = 1 + (0 - 1)/2 = 1/2; the unramified one
  // carries the upstairs coefficient unchanged.
  CHECK(fq.boundary.at(down_x) == Rat(1, 2));
  CHECK(fq.boundary.at(down_y) == Rat(1, 2));
}

TEST_CASE("riemann-hurwitz input validation") {
  LatticeRefinement ref;
  ref.sub_basis = IntMat::from_rows({{Int(1), Int(1)}, {Int(1), Int(-1)}}, 2);
  ToricAffine plane = ToricAffine::make(2, {{Int(1), Int(0)}, {Int(0), Int(1)}});
  CartierWitness w{{Rat(-1), Rat(-1)}, Int(1)};
  CHECK_THROWS_WITH_AS(riemann_hurwitz_check(ref, plane, {}, w, {{Int(2), Int(0)}}),
                       doctest::Contains("NotPrimitive"), Error);
  CHECK_THROWS_WITH_AS(riemann_hurwitz_check(ref, plane, {}, w, {{Int(0), Int(-1)}}),
                       doctest::Contains("OutsideCone"), Error);
}
