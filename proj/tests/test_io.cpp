#include <projlen/io.hpp>
#include <projlen/random.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace projlen;

TEST_CASE("curve json round trip is bit stable") {
  RandomSource rng(131);
  for (int t = 0; t < 25; ++t) {
    const PcvCurve c = rng.curve(rng.chance(0.5) ? 2 : 3, 6, true);
    const std::string text = to_json(c);
    const PcvCurve back = curve_from_json_text(text);
    CHECK(approx_equal(c, back, 0.0));
    CHECK(to_json(back) == text);
  }
}

TEST_CASE("vertex shorthand is accepted") {
  const PcvCurve c =
      curve_from_json_text(R"({"vertices": [[0, 0], [1, 0], [1, 1]]})");
  REQUIRE(c.pieces() == 2);
  CHECK(ac_norm(c) == Catch::Approx(2.0).margin(1e-14));
}

TEST_CASE("curve json rejects malformed input") {
  CHECK_THROWS_AS(curve_from_json_text("{"), ParseError);
  CHECK_THROWS_AS(curve_from_json_text(R"({"d": 2})"), ParseError);
  CHECK_THROWS_AS(curve_from_json_text(R"({"vertices": [[0, 0]]})"), ParseError);
  CHECK_THROWS_AS(
      curve_from_json_text(R"({"d": 2, "breakpoints": [0, 1], "velocities": [[1]]})"),
      ParseError);
}

TEST_CASE("measure json round trip is bit stable") {
  RandomSource rng(132);
  for (int t = 0; t < 25; ++t) {
    const DiscreteMeasure mu = rng.measure(rng.chance(0.5) ? 2 : 3, 7, false);
    const std::string text = to_json(mu);
    const DiscreteMeasure back = measure_from_json_text(text);
    CHECK(approx_equal(mu, back, 0.0));
    CHECK(to_json(back) == text);
  }
  CHECK_THROWS_AS(measure_from_json_text(R"({"d": 2, "atoms": [{"point": [0, 0]}]})"),
                  ParseError);
}

TEST_CASE("partition json round trip preserves cells, tags, and norm bound") {
  RandomSource rng(133);
  for (int t = 0; t < 10; ++t) {
    const TaggedPartition p = rng.arc_partition(7);
    const TaggedPartition back = partition_from_json_text(to_json(p));
    REQUIRE(back.size() == p.size());
    CHECK(back.norm_bound() == p.norm_bound());
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(back.arcs()[i].lo == p.arcs()[i].lo);
      CHECK(back.arcs()[i].hi == p.arcs()[i].hi);
      CHECK(proj_distance(back.tags()[i], p.tags()[i]) == 0.0);
    }
  }
  const TaggedPartition p3 = uniform_partition(3, 4);
  const TaggedPartition back3 = partition_from_json_text(to_json(p3));
  REQUIRE(back3.size() == p3.size());
  RandomSource rng3(134);
  for (int t = 0; t < 200; ++t) {
    const ProjectivePoint x = rng3.point(3);
    CHECK(back3.locate(x) == p3.locate(x));
  }
  CHECK_THROWS_AS(partition_from_json_text(R"({"d": 2, "cells": [[0, 1]]})"), ParseError);
}

TEST_CASE("samples csv and json round trips") {
  RandomSource rng(135);
  const DiscreteMeasure mu2 = rng.measure(2);
  const TransformSamples s2 = sample_transform(mu2, 12);
  const TransformSamples csv_back = samples_from_csv_text(to_csv(s2));
  REQUIRE(csv_back.values.size() == s2.values.size());
  for (std::size_t i = 0; i < s2.values.size(); ++i) {
    CHECK(csv_back.values[i] == s2.values[i]);
    CHECK((csv_back.directions[i] - s2.directions[i]).norm() < 1e-12);
  }
  const TransformSamples json_back = samples_from_json_text(to_json(s2));
  for (std::size_t i = 0; i < s2.values.size(); ++i)
    CHECK(json_back.values[i] == s2.values[i]);

  const DiscreteMeasure mu3 = rng.measure(3);
  const TransformSamples s3 = sample_transform(mu3, 9);
  const TransformSamples back3 = samples_from_csv_text(to_csv(s3));
  REQUIRE(back3.d == 3);
  for (std::size_t i = 0; i < s3.values.size(); ++i) {
    CHECK(back3.values[i] == s3.values[i]);
    CHECK((back3.directions[i] - s3.directions[i]).norm() == 0.0);
  }

  CHECK_THROWS_AS(samples_from_csv_text("totally,not,a,header\n"), ParseError);
  CHECK_THROWS_AS(samples_from_csv_text("theta,value\n0.1,abc\n"), ParseError);
  CHECK_THROWS_AS(samples_from_csv_text("theta,value\n0.1,-5\n"), ParseError);
}

TEST_CASE("format_double survives the round trip") {
  RandomSource rng(136);
  for (int t = 0; t < 500; ++t) {
    const double x = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.uniform_int(-12, 12));
    CHECK(std::stod(format_double(x)) == x);
  }
}
