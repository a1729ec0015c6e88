#include <projlen/projective.hpp>
#include <projlen/random.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace projlen;

namespace {
Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}
}  // namespace

TEST_CASE("canonical_lift picks the representative with positive last nonzero coordinate") {
  CHECK((canonical_lift(v2(0.0, -1.0)).rep() - v2(0.0, 1.0)).norm() < 1e-15);
  CHECK((canonical_lift(v2(-3.0, 0.0)).rep() - v2(1.0, 0.0)).norm() < 1e-15);

  const double s = 1.0 / std::sqrt(2.0);
  const ProjectivePoint a = canonical_lift(v2(1.0, -1.0));
  const ProjectivePoint b = canonical_lift(v2(-1.0, 1.0));
  CHECK((a.rep() - b.rep()).norm() < 1e-15);
  CHECK((a.rep() - v2(-s, s)).norm() < 1e-15);
}

TEST_CASE("canonical_lift rejects the zero vector") {
  CHECK_THROWS_AS(canonical_lift(v2(0.0, 0.0)), std::invalid_argument);
}

TEST_CASE("canonical_lift is scale invariant and idempotent") {
  RandomSource rng(71);
  for (int t = 0; t < 200; ++t) {
    const int d = rng.uniform_int(2, 5);
    const Vec v = rng.unit_vec(d);
    const double c = rng.chance(0.5) ? rng.uniform(0.1, 50.0) : -rng.uniform(0.1, 50.0);
    const ProjectivePoint p = canonical_lift(v);
    const ProjectivePoint q = canonical_lift(c * v);
    CHECK((p.rep() - q.rep()).norm() < 1e-12);
    CHECK((canonical_lift(p.rep()).rep() - p.rep()).norm() == 0.0);
  }
}

TEST_CASE("proj_distance basics") {
  const ProjectivePoint e1 = canonical_lift(v2(1.0, 0.0));
  const ProjectivePoint e2 = canonical_lift(v2(0.0, 1.0));
  CHECK(proj_distance(e1, e1) == 0.0);
  CHECK(proj_distance(e1, e2) == Catch::Approx(std::sqrt(2.0)).margin(1e-15));

  Vec e1_3(3), e2_3(3);
  e1_3 << 1, 0, 0;
  e2_3 << 0, 1, 0;
  CHECK_THROWS_AS(proj_distance(e1, canonical_lift(e1_3)), std::invalid_argument);
  CHECK(proj_distance(canonical_lift(e1_3), canonical_lift(e2_3)) ==
        Catch::Approx(std::sqrt(2.0)).margin(1e-15));
}

TEST_CASE("proj_distance matches the chord formula 2 sin(theta/2)") {
  RandomSource rng(72);
  for (int t = 0; t < 200; ++t) {
    const double base = rng.uniform(0.0, std::numbers::pi);
    const double theta = rng.uniform(0.0, 0.5 * std::numbers::pi);
    const ProjectivePoint x = point_at_angle(base);
    const ProjectivePoint y =
        point_at_angle(std::fmod(base + theta, std::numbers::pi));
    CHECK(proj_distance(x, y) ==
          Catch::Approx(2.0 * std::sin(0.5 * theta)).margin(1e-12));
  }
}

TEST_CASE("proj_distance is a metric on random triples") {
  RandomSource rng(73);
  for (int t = 0; t < 300; ++t) {
    const int d = rng.uniform_int(2, 4);
    const ProjectivePoint x = rng.point(d), y = rng.point(d), z = rng.point(d);
    const double xy = proj_distance(x, y);
    CHECK(xy == proj_distance(y, x));
    CHECK(xy >= 0.0);
    CHECK(xy <= std::sqrt(2.0) + 1e-12);
    CHECK(xy <= proj_distance(x, z) + proj_distance(z, y) + 1e-12);
  }
}

TEST_CASE("hat_extend evaluates the homogeneous extension") {
  auto one = [](const ProjectivePoint&) { return 1.0; };
  CHECK(hat_extend(one, v2(3.0, 4.0)) == Catch::Approx(5.0).margin(1e-15));
  CHECK(hat_extend(one, v2(0.0, 0.0)) == 0.0);

  // f_xi with xi = e1: the extension is |xi . w|
  auto f_e1 = [](const ProjectivePoint& p) { return std::abs(p.rep()[0]); };
  CHECK(hat_extend(f_e1, v2(-2.0, 0.0)) == Catch::Approx(2.0).margin(1e-15));

  RandomSource rng(74);
  for (int t = 0; t < 100; ++t) {
    const Vec w = rng.gaussian_vec(3);
    if (w.norm() == 0.0) continue;
    auto f = [](const ProjectivePoint& p) { return p.rep()[0] * p.rep()[1]; };
    CHECK(hat_extend(f, w) == Catch::Approx(hat_extend(f, Vec(-w))).margin(1e-12));
  }
}

TEST_CASE("hat_extend of a Lipschitz function is Lipschitz with the bundled norm") {
  // Cone bumps a * max(0, 1 - d_P(x, z)/r) have sup <= |a| and Lipschitz
  // constant <= |a|/r, so sums carry a certified bound B1 + B2.
  RandomSource rng(75);
  for (int t = 0; t < 120; ++t) {
    const int d = rng.uniform_int(2, 4);
    const int bumps = rng.uniform_int(1, 4);
    std::vector<ProjectivePoint> centers;
    std::vector<double> amps, radii;
    double b1 = 0.0, b2 = 0.0;
    for (int i = 0; i < bumps; ++i) {
      centers.push_back(rng.point(d));
      amps.push_back(rng.uniform(-1.5, 1.5));
      radii.push_back(rng.uniform(0.2, 1.2));
      b1 += std::abs(amps.back()) / radii.back();
      b2 += std::abs(amps.back());
    }
    auto f = [&](const ProjectivePoint& p) {
      double s = 0.0;
      for (int i = 0; i < bumps; ++i)
        s += amps[i] * std::max(0.0, 1.0 - proj_distance(p, centers[i]) / radii[i]);
      return s;
    };
    const Vec w1 = 3.0 * rng.gaussian_vec(d);
    const Vec w2 = 3.0 * rng.gaussian_vec(d);
    const double lhs = std::abs(hat_extend(f, w1) - hat_extend(f, w2));
    CHECK(lhs <= (b1 + b2) * (w1 - w2).norm() + 1e-9);
  }
}

TEST_CASE("rep_angle maps the canonical representative into [0, pi)") {
  CHECK(rep_angle(canonical_lift(v2(1.0, 0.0))) == 0.0);
  CHECK(rep_angle(canonical_lift(v2(-1.0, 0.0))) == 0.0);
  CHECK(rep_angle(point_at_angle(1.25)) == Catch::Approx(1.25).margin(1e-14));
  RandomSource rng(76);
  for (int t = 0; t < 200; ++t) {
    const double a = rep_angle(rng.point(2));
    CHECK(a >= 0.0);
    CHECK(a < std::numbers::pi);
  }
}
