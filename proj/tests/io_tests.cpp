#include "kltq/io.hpp"

#include "doctest.h"

using namespace kltq;

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rat("2/4") == Rat(1, 2));
  CHECK(parse_rat("-3") == Rat(-3));
  CHECK(parse_rat("0") == 0);
  CHECK(rat_str(Rat(2, 4)) == "1/2");
  CHECK(rat_str(Rat(-6, 4)) == "-3/2");
  CHECK(rat_str(Rat(5)) == "5");
  CHECK_THROWS_WITH_AS(parse_rat("1/0"), doctest::Contains("InputError"), Error);
  CHECK_THROWS_WITH_AS(parse_rat("x"), doctest::Contains("InputError"), Error);
  CHECK_THROWS_WITH_AS(parse_rat("1.5"), doctest::Contains("InputError"), Error);
  CHECK_THROWS_WITH_AS(parse_rat(""), doctest::Contains("InputError"), Error);
  // Round trip on mixed denominators.
  for (long p = -8; p <= 8; ++p)
    for (long q = 1; q <= 5; ++q) {
      Rat r(p, q);
      r.canonicalize();
      CHECK(parse_rat(rat_str(r)) == r);
    }
}

TEST_CASE("curve point serialization") {
  CHECK(parse_point(Json("inf")) == CurvePoint::inf());
  CHECK(parse_point(Json("-1/2")) == CurvePoint::at(Rat(-1, 2)));
  CHECK(point_json(CurvePoint::inf()) == Json("inf"));
  CHECK(point_json(CurvePoint::at(Rat(2, 4))) == Json("1/2"));
  CHECK_THROWS_AS(parse_point(Json(3)), Error);
}

TEST_CASE("toric input validation") {
  std::vector<std::string> notes;
  Json good = {{"rank", 2}, {"rays", {{1, 0}, {0, 1}}}};
  ToricAffine x = parse_toric(good, notes);
  CHECK(x.lattice_rank == 2);
  CHECK(notes.empty());

  Json scaled = {{"rank", 2}, {"rays", {{2, 0}, {0, 1}}}};
  parse_toric(scaled, notes);
  CHECK(notes.size() == 1);  // auto-primitivized with a note

  Json zero = {{"rank", 2}, {"rays", {{0, 0}}}};
  CHECK_THROWS_WITH_AS(parse_toric(zero, notes),
                       doctest::Contains("InputError"), Error);
  Json shape = {{"rank", 3}, {"rays", {{1, 0}}}};
  CHECK_THROWS_WITH_AS(parse_toric(shape, notes),
                       doctest::Contains("InputError"), Error);
  Json missing = {{"rank", 2}};
  CHECK_THROWS_WITH_AS(parse_toric(missing, notes),
                       doctest::Contains("missing field"), Error);
  Json halfplane = {{"rank", 2}, {"rays", {{1, 0}, {-1, 0}, {0, 1}}}};
  CHECK_THROWS_WITH_AS(parse_toric(halfplane, notes),
                       doctest::Contains("InputError"), Error);
}

TEST_CASE("weight action input") {
  Json j = {{"n", 4},
            {"weights", {{2, -1, -1, 1}}},
            {"finite", {{{"order", 3}, {"weights", {1, 0, 0, 2}}}}}};
  WeightAction a = parse_action(j);
  CHECK(a.n == 4);
  CHECK(a.torus_weights.rows == 1);
  REQUIRE(a.finite_factors.size() == 1);
  CHECK(a.finite_factors[0].order == 3);

  Json bad_order = {{"n", 2}, {"weights", Json::array()},
                    {"finite", {{{"order", 1}, {"weights", {1, 1}}}}}};
  CHECK_THROWS_WITH_AS(parse_action(bad_order),
                       doctest::Contains("InputError"), Error);
  Json bad_len = {{"n", 3}, {"weights", {{1, 2}}}};
  CHECK_THROWS_WITH_AS(parse_action(bad_len),
                       doctest::Contains("InputError"), Error);
}

TEST_CASE("polyhedral divisor round trip") {
  Json j = {{"rank", 1},
            {"tail_rays", {{1}}},
            {"slices",
             {{{"point", "0"}, {"vertices", {{"1/3"}}}},
              {{"point", "inf"}, {"vertices", {{"0"}, {"-2"}}}},
              {{"point", "5/2"}, {"empty", true}}}}};
  PDivisorC1 d = parse_pdivisor(j);
  CHECK(d.lattice_rank == 1);
  CHECK(d.slices.size() == 3);
  CHECK(d.slices.at(CurvePoint::at(Rat(5, 2))).empty);
  PDivisorC1 again = parse_pdivisor(pdivisor_json(d));
  CHECK(pdivisor_json(again) == pdivisor_json(d));

  Json dup = {{"rank", 1},
              {"tail_rays", Json::array()},
              {"slices",
               {{{"point", "1/2"}, {"vertices", {{"0"}}}},
                {{"point", "2/4"}, {"vertices", {{"1"}}}}}}};
  CHECK_THROWS_WITH_AS(parse_pdivisor(dup),
                       doctest::Contains("duplicate"), Error);
}

TEST_CASE("text rendering is flat and deterministic") {
  Json j;
  j["a"] = {{"b", "1/2"}, {"c", {1, 2}}};
  j["d"] = true;
  std::string t = render_text(j);
  CHECK(t == "a.b = 1/2\na.c = 1 2\nd = true\n");
}
