#include <projlen/partition.hpp>
#include <projlen/random.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace projlen;

TEST_CASE("uniform_partition d=2 basics") {
  const double pi = std::numbers::pi;

  const TaggedPartition one = uniform_partition(2, 1);
  REQUIRE(one.size() == 1);
  CHECK(one.arcs()[0].lo == 0.0);
  CHECK(one.arcs()[0].hi == pi);
  CHECK(rep_angle(one.tags()[0]) == Catch::Approx(pi / 2).margin(1e-15));

  const TaggedPartition four = uniform_partition(2, 4);
  REQUIRE(four.size() == 4);
  CHECK(four.norm_bound() == Catch::Approx(0.76537).margin(1e-5));
  CHECK(four.norm_bound() == Catch::Approx(2.0 * std::sin(pi / 8)).margin(1e-15));

  CHECK(uniform_partition(2, 180).norm_bound() <= 0.0175);

  CHECK_THROWS_AS(uniform_partition(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_partition(1, 4), std::invalid_argument);
}

TEST_CASE("uniform_partition d=2 cells tile [0, pi) and tags sit in their cells") {
  for (int n : {1, 2, 5, 9}) {
    const TaggedPartition p = uniform_partition(2, n);
    CHECK(p.arcs().front().lo == 0.0);
    CHECK(p.arcs().back().hi == std::numbers::pi);
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      CHECK(p.arcs()[i].hi == p.arcs()[i + 1].lo);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.locate(p.tags()[i]) == i);
  }
}

TEST_CASE("locate on d=2 partitions is the half-open interval test") {
  const TaggedPartition p = uniform_partition(2, 4);
  CHECK(p.locate(point_at_angle(0.0)) == 0);
  CHECK(p.locate(point_at_angle(std::numbers::pi / 4)) == 1);  // boundary goes right
  CHECK(p.locate(point_at_angle(3.0)) == 3);
  RandomSource rng(81);
  for (int t = 0; t < 300; ++t) {
    const ProjectivePoint x = rng.point(2);
    const std::size_t c = p.locate(x);
    const double theta = rep_angle(x);
    CHECK(p.arcs()[c].lo <= theta + 1e-12);
    CHECK(theta < p.arcs()[c].hi + 1e-12);
  }
}

TEST_CASE("refine d=2 bisects arcs and keeps the original tags") {
  const TaggedPartition two = uniform_partition(2, 2);
  const TaggedPartition refined = refine(two, 2);
  const TaggedPartition four = uniform_partition(2, 4);
  REQUIRE(refined.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(refined.arcs()[i].lo == Catch::Approx(four.arcs()[i].lo).margin(1e-15));
    CHECK(refined.arcs()[i].hi == Catch::Approx(four.arcs()[i].hi).margin(1e-15));
  }
  // original midpoint tags pi/4 and 3pi/4 retained among the four tags
  int retained = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (const auto& tag : two.tags())
      if (proj_distance(refined.tags()[i], tag) == 0.0) ++retained;
  CHECK(retained == 2);
  CHECK(refined.norm_bound() < two.norm_bound());
}

TEST_CASE("refine d=2 counts cells and strictly shrinks the norm bound") {
  RandomSource rng(82);
  for (int t = 0; t < 10; ++t) {
    const TaggedPartition p = rng.arc_partition(6);
    for (int k : {2, 3}) {
      const TaggedPartition r = refine(p, k);
      CHECK(r.size() == k * p.size());
      CHECK(r.norm_bound() < p.norm_bound());
      // containment: each new cell sits inside the parent with matching order
      for (std::size_t j = 0; j < r.size(); ++j) {
        const std::size_t parent = j / k;
        CHECK(r.arcs()[j].lo >= p.arcs()[parent].lo - 1e-15);
        CHECK(r.arcs()[j].hi <= p.arcs()[parent].hi + 1e-15);
      }
      for (std::size_t i = 0; i < p.size(); ++i) {
        bool found = false;
        for (const auto& tag : r.tags())
          if (proj_distance(tag, p.tags()[i]) == 0.0) found = true;
        CHECK(found);
      }
    }
  }
  CHECK_THROWS_AS(refine(uniform_partition(2, 2), 1), std::invalid_argument);
}

TEST_CASE("uniform_partition d=3 satisfies the tagged-partition invariants") {
  const TaggedPartition p = uniform_partition(3, 6);
  REQUIRE(p.size() == 6);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.locate(p.tags()[i]) == i);

  // every point lands in exactly one cell, tags are distinct, and sampled
  // pairwise representative distances never exceed the norm bound
  RandomSource rng(83);
  std::vector<std::vector<Vec>> members(p.size());
  for (int t = 0; t < 4000; ++t) {
    const ProjectivePoint x = rng.point(3);
    members[p.locate(x)].push_back(x.rep());
  }
  for (std::size_t c = 0; c < p.size(); ++c) {
    for (std::size_t a = 0; a + 1 < members[c].size(); a += 7)
      for (std::size_t b = a + 1; b < members[c].size(); b += 11)
        CHECK((members[c][a] - members[c][b]).norm() <= p.norm_bound() + 1e-9);
  }
}

TEST_CASE("refine d=3 produces nested cells with retained tags") {
  const TaggedPartition p = uniform_partition(3, 4);
  const TaggedPartition r = refine(p, 2);
  REQUIRE(r.size() == 8);
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool found = false;
    for (const auto& tag : r.tags())
      if (proj_distance(tag, p.tags()[i]) == 0.0) found = true;
    CHECK(found);
  }
  for (std::size_t j = 0; j < r.size(); ++j) CHECK(r.locate(r.tags()[j]) == j);

  // brute-force membership: every sampled point's refined cell nests in its
  // coarse cell, in order
  RandomSource rng(84);
  for (int t = 0; t < 2000; ++t) {
    const ProjectivePoint x = rng.point(3);
    const std::size_t coarse = p.locate(x);
    const std::size_t fine = r.locate(x);
    CHECK(fine / 2 == coarse);
  }
}
