#include "kltq/torsing.hpp"

#include "doctest.h"

using namespace kltq;

namespace {

const std::vector<IntVec> kReferenceRays = {
    {Int(0), Int(0), Int(1)},
    {Int(0), Int(1), Int(2)},
    {Int(1), Int(0), Int(1)},
    {Int(1), Int(1), Int(1)}};

}  // namespace

TEST_CASE("canonical witness infeasibility with certificate") {
  ToricAffine x = ToricAffine::make(3, kReferenceRays);
  QGorensteinResult q = q_gorenstein_witness(x, ToricBoundary{});
  REQUIRE(!q.feasible());
  REQUIRE(q.infeasibility.has_value());
  RatVec comb(3, Rat(0));
  Rat rhs = 0;
  for (size_t i = 0; i < kReferenceRays.size(); ++i) {
    for (int j = 0; j < 3; ++j)
      comb[j] += (*q.infeasibility)[i] * Rat(kReferenceRays[i][j]);
    rhs += (*q.infeasibility)[i] * Rat(-1);
  }
  for (Rat& c : comb) {
    c.canonicalize();
    CHECK(c == 0);
  }
  rhs.canonicalize();
  CHECK(rhs != 0);
}

TEST_CASE("restricted-support certificate pins the boundary") {
  ToricAffine x = ToricAffine::make(3, kReferenceRays);
  // Ray 0 = (0,0,1); the other three rays are pinned at coefficient 0.
  auto cert = klt_type_certificate(x, std::set<int>{0});
  REQUIRE(cert.has_value());
  CHECK(cert->boundary.coeff(0) == Rat(1, 2));
  for (int i = 1; i < 4; ++i) CHECK(cert->boundary.coeff(i) == 0);
  CHECK(cert->witness.cartier_index == 2);
  CHECK(cert->ray_log_discrepancies ==
        std::vector<Rat>{Rat(1, 2), Rat(1), Rat(1), Rat(1)});
  // Witness solves every ray equation exactly.
  for (size_t i = 0; i < kReferenceRays.size(); ++i) {
    Rat v = dot(cert->witness.m, kReferenceRays[i]);
    v.canonicalize();
    CHECK(v == cert->boundary.coeff(static_cast<int>(i)) - 1);
  }
}

TEST_CASE("log discrepancies at interior points") {
  ToricAffine x = ToricAffine::make(3, kReferenceRays);
  auto cert = klt_type_certificate(x, std::set<int>{0});
  REQUIRE(cert.has_value());
  CHECK(log_discrepancy(x, cert->witness, {Int(1), Int(1), Int(2)}) == Rat(3, 2));
  CHECK_THROWS_WITH_AS(log_discrepancy(x, cert->witness, {Int(2), Int(2), Int(4)}),
                       doctest::Contains("NotPrimitive"), Error);
  CHECK_THROWS_WITH_AS(log_discrepancy(x, cert->witness, {Int(-1), Int(0), Int(0)}),
                       doctest::Contains("OutsideCone"), Error);
}

TEST_CASE("star subdivision at an interior lattice point") {
  ToricAffine x = ToricAffine::make(3, kReferenceRays);
  auto fan = star_subdivide({x.sigma}, {Int(1), Int(1), Int(2)});
  REQUIRE(fan.size() == 4);
  for (const Cone& c : fan) {
    CHECK(c.rays.size() == 3);
    CHECK(c.is_smooth());
  }
  CHECK_THROWS_WITH_AS(star_subdivide({x.sigma}, {Int(0), Int(0), Int(-1)}),
                       doctest::Contains("OutsideSupport"), Error);
  CHECK_THROWS_WITH_AS(star_subdivide({x.sigma}, {Int(2), Int(2), Int(4)}),
                       doctest::Contains("NotPrimitive"), Error);
}

TEST_CASE("resolution reaches a smooth fan") {
  // Quadric cone singularity: one exceptional ray at (1,1).
  ToricAffine a1 = ToricAffine::make(2, {{Int(1), Int(0)}, {Int(1), Int(2)}});
  Resolution r = resolve(a1);
  for (const Cone& c : r.fan) CHECK(c.is_smooth());
  CHECK(r.exceptional_rays == std::vector<IntVec>{{Int(1), Int(1)}});

  ToricAffine x = ToricAffine::make(3, kReferenceRays);
  Resolution rx = resolve(x);
  for (const Cone& c : rx.fan) CHECK(c.is_smooth());
  CHECK(!rx.exceptional_rays.empty());
  // Seeded subdivision is honored first.
  Resolution seeded = resolve(x, {{Int(1), Int(1), Int(2)}});
  bool has_seed = false;
  for (const IntVec& e : seeded.exceptional_rays)
    if (e == IntVec{Int(1), Int(1), Int(2)}) has_seed = true;
  CHECK(has_seed);
}

TEST_CASE("minimal index witnesses search the solution space") {
  // m0 = (1/2, 1/2) plus span{(1,1)} contains the integral point (1,1).
  CartierWitness w = minimal_index_witness({Rat(1, 2), Rat(1, 2)}, {{Rat(1), Rat(1)}});
  CHECK(w.cartier_index == 1);
  // Without the kernel the denominators are forced.
  CartierWitness f = minimal_index_witness({Rat(1, 2), Rat(1, 3)}, {});
  CHECK(f.cartier_index == 6);
  CHECK(f.m == RatVec{Rat(1, 2), Rat(1, 3)});
}

TEST_CASE("boundary validation") {
  ToricAffine x = ToricAffine::make(2, {{Int(1), Int(0)}, {Int(0), Int(1)}});
  CHECK_THROWS_WITH_AS(ToricBoundary::validated(x, {{0, Rat(1)}}),
                       doctest::Contains("BoundaryOutOfRange"), Error);
  CHECK_THROWS_WITH_AS(ToricBoundary::validated(x, {{5, Rat(1, 2)}}),
                       doctest::Contains("BadRayIndex"), Error);
  ToricBoundary b = ToricBoundary::validated(x, {{0, Rat(1, 2)}});
  CHECK(b.coeff(0) == Rat(1, 2));
  CHECK(b.coeff(1) == 0);
}
