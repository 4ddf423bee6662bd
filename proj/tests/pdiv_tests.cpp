#include "kltq/pdiv.hpp"

#include "doctest.h"

using namespace kltq;

namespace {

PDivisorC1 diagonal_plane() {
  ToricAffine a2 = ToricAffine::make(2, {{Int(1), Int(0)}, {Int(0), Int(1)}});
  return downgrade(a2, IntMat::from_rows({{Int(1), Int(1)}}, 2));
}

PDivisorC1 quadric_cone_downgrade() {
  ToricAffine a1 = ToricAffine::make(2, {{Int(1), Int(0)}, {Int(1), Int(2)}});
  return downgrade(a1, IntMat::from_rows({{Int(1), Int(1)}}, 2));
}

}  // namespace

TEST_CASE("downgrading the plane along the diagonal subtorus") {
  PDivisorC1 d = diagonal_plane();
  CHECK(d.lattice_rank == 1);
  CHECK(d.tail.rays.size() == 1);
  REQUIRE(d.slices.size() == 2);
  CHECK(d.slices.at(CurvePoint::at(Rat(0))).vertices ==
        std::vector<RatVec>{{Rat(0)}});
  CHECK(d.slices.at(CurvePoint::inf()).vertices ==
        std::vector<RatVec>{{Rat(1)}});
  CHECK(!d.locus_is_affine());

  Evaluation ev = evaluate(d, {Rat(1)});
  CHECK(ev.degree == 1);
  CHECK(is_proper(d).proper);
  CHECK_THROWS_WITH_AS(evaluate(d, {Rat(-1)}),
                       doctest::Contains("OutsideWeightCone"), Error);

  VerRayData vr = ver_ray_sets(d);
  CHECK(vr.vertical.size() == 2);
  CHECK(vr.horizontal.empty());

  InvariantDivisor canon = canonical_rep(d);
  CHECK(canon.vertical_coeffs == std::vector<Rat>{Rat(-1), Rat(-1)});

  // Graded dimensions match monomial counts on the plane.
  CHECK(graded_dimension(d, {Int(3)}) == 4);
  CHECK(graded_dimension(d, {Int(0)}) == 1);
  CHECK_THROWS_WITH_AS(graded_dimension(d, {Int(-1)}),
                       doctest::Contains("OutsideWeightCone"), Error);

  TQGorensteinResult qg = q_gorenstein_tvar(d, TBoundary{});
  REQUIRE(qg.feasible());
  CHECK(qg.witness->m == RatVec{Rat(-2)});
  CHECK(qg.witness->cartier_index == 1);
  CHECK(qg.witness->f_divisor.at(CurvePoint::at(Rat(0))) == -1);
  CHECK(qg.witness->f_divisor.at(CurvePoint::inf()) == 1);

  auto cert = quotient_klt_certificate(d, TBoundary{}, *qg.witness);
  CHECK(cert.pass);
  CHECK(cert.b_y.empty());
}

TEST_CASE("evaluation is superadditive") {
  PDivisorC1 d = quadric_cone_downgrade();
  for (long m1 = 0; m1 <= 4; ++m1)
    for (long m2 = 0; m2 <= 4; ++m2) {
      Evaluation a = evaluate(d, {Rat(m1)});
      Evaluation b = evaluate(d, {Rat(m2)});
      Evaluation c = evaluate(d, {Rat(m1 + m2)});
      for (const auto& [z, coeff] : c.coeffs)
        CHECK(a.coeffs.at(z) + b.coeffs.at(z) <= coeff);
    }
}

TEST_CASE("hyperbolic downgrade has an affine locus") {
  ToricAffine a2 = ToricAffine::make(2, {{Int(1), Int(0)}, {Int(0), Int(1)}});
  PDivisorC1 d = downgrade(a2, IntMat::from_rows({{Int(1), Int(-1)}}, 2));
  CHECK(d.locus_is_affine());
  CHECK(d.tail.rays.empty());
  CHECK(d.slices.at(CurvePoint::inf()).empty);
  CHECK(d.slices.at(CurvePoint::at(Rat(0))).vertices.size() == 2);
  CHECK(is_proper(d).proper);
  CHECK_THROWS_WITH_AS(graded_dimension(d, {Int(0)}),
                       doctest::Contains("InfiniteDimensional"), Error);
  CHECK_THROWS_WITH_AS(quotient_klt_certificate(d, TBoundary{},
                                                TCartierWitness{{Rat(-1)}, {}, Int(1)}),
                       doctest::Contains("QuotientNotAPoint"), Error);
}

TEST_CASE("quadric cone downgrade certificates") {
  PDivisorC1 d = quadric_cone_downgrade();
  CHECK(graded_dimension(d, {Int(1)}) == 3);
  TQGorensteinResult qg = q_gorenstein_tvar(d, TBoundary{});
  REQUIRE(qg.feasible());
  CHECK(qg.witness->m == RatVec{Rat(-1)});
  CHECK(qg.witness->cartier_index == 1);
  auto cert = quotient_klt_certificate(d, TBoundary{}, *qg.witness);
  CHECK(cert.pass);
  // The canonical witness reproduces the canonical representative exactly.
  InvariantDivisor princ = principal_divisor(d, *qg.witness);
  InvariantDivisor canon = canonical_rep(d);
  CHECK(princ.vertical_coeffs == canon.vertical_coeffs);
  CHECK(princ.horizontal_coeffs == canon.horizontal_coeffs);
}

TEST_CASE("downgrades preserve the canonical witness verdict") {
  ToricAffine x = ToricAffine::make(3, {{Int(0), Int(0), Int(1)},
                                        {Int(0), Int(1), Int(2)},
                                        {Int(1), Int(0), Int(1)},
                                        {Int(1), Int(1), Int(1)}});
  PDivisorC1 d = downgrade(
      x, IntMat::from_rows({{Int(1), Int(0), Int(0)}, {Int(0), Int(1), Int(0)}}, 3));
  CHECK(d.lattice_rank == 2);
  CHECK(is_proper(d).proper);
  CHECK(!q_gorenstein_tvar(d, TBoundary{}).feasible());
  CHECK(!q_gorenstein_witness(x, ToricBoundary{}).feasible());
}

TEST_CASE("downgrade input validation") {
  ToricAffine a2 = ToricAffine::make(2, {{Int(1), Int(0)}, {Int(0), Int(1)}});
  CHECK_THROWS_WITH_AS(downgrade(a2, IntMat::from_rows({{Int(2), Int(2)}}, 2)),
                       doctest::Contains("SublatticeNotSaturated"), Error);
  ToricAffine a3 = ToricAffine::make(3, {{Int(1), Int(0), Int(0)},
                                         {Int(0), Int(1), Int(0)},
                                         {Int(0), Int(0), Int(1)}});
  CHECK_THROWS_WITH_AS(downgrade(a3, IntMat::from_rows({{Int(1), Int(0), Int(0)}}, 3)),
                       doctest::Contains("ComplexityNotOne"), Error);
}

TEST_CASE("engineered control divisor fails the coefficient check") {
  Cone tail = Cone::from_rays(1, {{Int(1)}});
  std::map<CurvePoint, Polyhedron> slices;
  slices[CurvePoint::at(Rat(0))] =
      Polyhedron::from_vertices_tail({{Rat(1, 3)}}, tail);
  slices[CurvePoint::inf()] = Polyhedron::from_vertices_tail({{Rat(0)}}, tail);
  PDivisorC1 d = PDivisorC1::make(1, tail, slices);
  TCartierWitness w;
  w.m = {Rat(-1)};
  w.f_divisor[CurvePoint::at(Rat(0))] = 1;
  w.f_divisor[CurvePoint::inf()] = -1;
  w.cartier_index = 1;
  auto cert = quotient_klt_certificate(d, TBoundary{}, w);
  CHECK(!cert.pass);
  CHECK(!cert.coefficient_check);
  CHECK(cert.degree_check);
  CHECK(cert.b_y.at(CurvePoint::at(Rat(0))) == Rat(5, 3));
}

TEST_CASE("principal divisors require degree zero") {
  PDivisorC1 d = diagonal_plane();
  TCartierWitness w;
  w.m = {Rat(-1)};
  w.f_divisor[CurvePoint::at(Rat(0))] = 1;  // deg f = 1
  w.cartier_index = 1;
  CHECK_THROWS_WITH_AS(principal_divisor(d, w),
                       doctest::Contains("NotDegreeZero"), Error);
}

TEST_CASE("canonical points must lie in the locus and differ") {
  PDivisorC1 d = diagonal_plane();
  CHECK_THROWS_WITH_AS(canonical_rep(d, CurvePoint::at(Rat(0)), CurvePoint::at(Rat(0))),
                       doctest::Contains("BadCanonicalPoints"), Error);
  ToricAffine a2 = ToricAffine::make(2, {{Int(1), Int(0)}, {Int(0), Int(1)}});
  PDivisorC1 aff = downgrade(a2, IntMat::from_rows({{Int(1), Int(-1)}}, 2));
  CHECK_THROWS_WITH_AS(canonical_rep(aff, CurvePoint::at(Rat(0)), CurvePoint::inf()),
                       doctest::Contains("CanonicalPointOutsideLocus"), Error);
}

TEST_CASE("verdicts do not depend on the canonical point choice") {
  PDivisorC1 d = quadric_cone_downgrade();
  auto z0 = CurvePoint::at(Rat(1));
  auto z1 = CurvePoint::at(Rat(-3));
  TQGorensteinResult qg = q_gorenstein_tvar(d, TBoundary{}, z0, z1);
  REQUIRE(qg.feasible());
  CHECK(qg.witness->cartier_index == 1);
  auto cert = quotient_klt_certificate(d, TBoundary{}, *qg.witness, z0, z1);
  CHECK(cert.pass);
}
