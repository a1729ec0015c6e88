#include <projlen/cosine.hpp>
#include <projlen/random.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace projlen;

namespace {
Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}
std::vector<Vec> pts(std::initializer_list<std::pair<double, double>> list) {
  std::vector<Vec> out;
  for (auto [x, y] : list) out.push_back(v2(x, y));
  return out;
}

// quadrature oracle used to pin the multiplier values: composite Simpson with
// panels split at the kinks of |cos|
double multiplier_oracle(int k) {
  const double pi = std::numbers::pi;
  auto g = [&](double u) { return std::abs(std::cos(u)) * std::cos(2.0 * k * u); };
  auto simpson = [&](double lo, double hi) {
    const int n = 4096;
    const double h = (hi - lo) / n;
    double s = g(lo) + g(hi);
    for (int i = 1; i < n; ++i) s += g(lo + i * h) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
  };
  return simpson(0.0, 0.5 * pi) + simpson(0.5 * pi, 1.5 * pi) + simpson(1.5 * pi, 2.0 * pi);
}
}  // namespace

TEST_CASE("forward_discrete on point masses") {
  const DiscreteMeasure e1(2, {{canonical_lift(v2(1, 0)), 1.0}});
  CHECK(forward_discrete(e1, v2(1, 0)) == Catch::Approx(1.0).margin(1e-15));
  CHECK(forward_discrete(e1, v2(0, 1)) == Catch::Approx(0.0).margin(1e-15));

  RandomSource rng(111);
  for (int t = 0; t < 60; ++t) {
    const int d = rng.chance(0.5) ? 2 : 3;
    const ProjectivePoint u = rng.point(d);
    const Vec xi = rng.unit_vec(d);
    const DiscreteMeasure mu(d, {{u, 1.0}});
    CHECK(forward_discrete(mu, xi) ==
          Catch::Approx(std::abs(xi.dot(u.rep()))).margin(1e-14));
    CHECK(forward_discrete(mu, xi) == forward_discrete(mu, Vec(-xi)));
  }

  const DiscreteMeasure corner = measure_of(from_vertices(pts({{0, 0}, {1, 0}, {1, 1}})));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(forward_discrete(corner, v2(s, s)) == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("direction normalization rule") {
  const DiscreteMeasure e1(2, {{canonical_lift(v2(1, 0)), 1.0}});
  CHECK(forward_discrete(e1, v2(1.0 + 1e-8, 0.0)) == Catch::Approx(1.0).margin(1e-7));
  CHECK_THROWS_AS(forward_discrete(e1, v2(1.5, 0.0)), std::invalid_argument);
}

TEST_CASE("forward_curve equals the transform of the induced measure") {
  const PcvCurve seg = from_vertices(pts({{0, 0}, {1, 0}}));
  RandomSource rng(112);
  for (int t = 0; t < 30; ++t) {
    const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
    CHECK(forward_curve(seg, v2(std::cos(th), std::sin(th))) ==
          Catch::Approx(std::abs(std::cos(th))).margin(1e-14));
  }
  for (int t = 0; t < 100; ++t) {
    const int d = rng.chance(0.5) ? 2 : 3;
    const PcvCurve c = rng.curve(d, 6, true);
    const Vec xi = rng.unit_vec(d);
    CHECK(forward_curve(c, xi) ==
          Catch::Approx(forward_discrete(measure_of(c), xi)).margin(1e-12));
    CHECK(forward_curve(c, xi) == Catch::Approx(forward_curve(reverse(c), xi)).margin(1e-12));
  }
}

TEST_CASE("forward linearity") {
  RandomSource rng(113);
  for (int t = 0; t < 50; ++t) {
    const int d = rng.chance(0.5) ? 2 : 3;
    const DiscreteMeasure mu = rng.measure(d), nu = rng.measure(d);
    const Vec xi = rng.unit_vec(d);
    CHECK(forward_discrete(add(mu, nu), xi) ==
          Catch::Approx(forward_discrete(mu, xi) + forward_discrete(nu, xi)).margin(1e-12));
  }
}

TEST_CASE("forward_density of the uniform unit-mass density is 2/pi") {
  const double pi = std::numbers::pi;
  auto uniform = [&](double) { return 1.0 / pi; };
  RandomSource rng(114);
  for (int t = 0; t < 10; ++t) {
    const Vec xi = rng.unit_vec(2);
    CHECK(forward_density(uniform, xi, 2048) ==
          Catch::Approx(2.0 / pi).margin(1e-8));
  }
  CHECK(forward_density([](double) { return 0.0; }, v2(1, 0), 64) == 0.0);
  CHECK_THROWS_AS(forward_density(uniform, v2(1, 0), 8), std::invalid_argument);
}

TEST_CASE("forward_density concentrates to the point-mass transform") {
  const double pi = std::numbers::pi;
  const double theta0 = 1.1;
  const double eps = 1e-4;
  auto bump = [&](double th) {
    return (std::abs(th - theta0) < eps) ? 1.0 / (2.0 * eps) : 0.0;
  };
  RandomSource rng(115);
  for (int t = 0; t < 5; ++t) {
    const Vec xi = rng.unit_vec(2);
    const DiscreteMeasure atom(2, {{point_at_angle(theta0), 1.0}});
    CHECK(forward_density(bump, xi, 400000) ==
          Catch::Approx(forward_discrete(atom, xi)).margin(1e-4));
  }
  (void)pi;
}

TEST_CASE("sample_transform produces the half-circle grid") {
  const DiscreteMeasure e1(2, {{canonical_lift(v2(1, 0)), 1.0}});
  const TransformSamples s = sample_transform(e1, 2);
  REQUIRE(s.values.size() == 2);
  CHECK(s.values[0] == Catch::Approx(1.0).margin(1e-14));
  CHECK(s.values[1] == Catch::Approx(0.0).margin(1e-14));
  CHECK(sample_transform(e1, 7).values.size() == 7);

  // near-uniform measures give near-constant samples 2/pi * mass
  const int n = 400;
  std::vector<Atom> atoms;
  for (int k = 0; k < n; ++k)
    atoms.push_back({point_at_angle((k + 0.5) * std::numbers::pi / n), 1.0 / n});
  const DiscreteMeasure near_uniform(2, atoms);
  for (double v : sample_transform(near_uniform, 12).values)
    CHECK(v == Catch::Approx(2.0 / std::numbers::pi).margin(1e-4));

  // d = 3: spread directions, correct count, unit norms
  RandomSource rng(116);
  const DiscreteMeasure mu3 = rng.measure(3);
  const TransformSamples s3 = sample_transform(mu3, 20);
  REQUIRE(s3.directions.size() == 20);
  for (const Vec& xi : s3.directions) CHECK(std::abs(xi.norm() - 1.0) < 1e-12);
}

TEST_CASE("nnls recovers tag-supported measures exactly") {
  RandomSource rng(117);
  const TaggedPartition p = uniform_partition(2, 24);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (rng.chance(0.4)) atoms.push_back({p.tags()[i], rng.uniform(0.1, 2.0)});
  if (atoms.empty()) atoms.push_back({p.tags()[0], 1.0});
  const DiscreteMeasure mu(2, atoms);

  const TransformSamples data = sample_transform(mu, 96);
  const InversionResult inv = invert_nnls(data, p, 1e-12);
  CHECK(inv.converged);
  CHECK_FALSE(inv.rank_deficient);
  CHECK(inv.residual_rms <= 1e-10);
  CHECK(approx_equal(inv.measure, mu, 1e-8));
}

TEST_CASE("nnls inverts zero data to the empty measure") {
  const TaggedPartition p = uniform_partition(2, 8);
  TransformSamples zeros;
  zeros.d = 2;
  for (int k = 0; k < 16; ++k) {
    const double th = k * std::numbers::pi / 16;
    zeros.directions.push_back(v2(std::cos(th), std::sin(th)));
    zeros.values.push_back(0.0);
  }
  const InversionResult inv = invert_nnls(zeros, p, 1e-12);
  CHECK(inv.converged);
  CHECK(inv.measure.empty());
  CHECK(inv.residual_rms == 0.0);

  CHECK_THROWS_AS(invert_nnls(zeros, p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(invert_nnls(TransformSamples{2, {}, {}}, p, 1e-10),
                  std::invalid_argument);
}

TEST_CASE("cosine multipliers match their defining integrals") {
  CHECK(cosine_multiplier(0) == 4.0);
  CHECK(cosine_multiplier(1) == Catch::Approx(4.0 / 3.0).margin(1e-15));
  CHECK(cosine_multiplier(2) == Catch::Approx(-4.0 / 15.0).margin(1e-15));
  for (int k = 0; k <= 10; ++k)
    CHECK(cosine_multiplier(k) == Catch::Approx(multiplier_oracle(k)).margin(1e-10));
}

TEST_CASE("fourier inversion round trip on trigonometric densities") {
  const double pi = std::numbers::pi;
  auto density = [&](double th) { return (1.0 + std::cos(4.0 * th)) / pi; };
  const int grid = 256;
  std::vector<double> samples(grid);
  for (int j = 0; j < grid; ++j) {
    Vec xi(2);
    const double phi = j * pi / grid;
    xi << std::cos(phi), std::sin(phi);
    samples[j] = forward_density(density, xi, 4096);
  }
  const FourierDensity rec = invert_fourier_d2(samples, 8);
  double num = 0.0, den = 0.0;
  for (int j = 0; j < 720; ++j) {
    const double th = j * pi / 720;
    num += std::pow(rec(th) - density(th), 2);
    den += std::pow(density(th), 2);
  }
  CHECK(std::sqrt(num / den) <= 1e-8);

  CHECK_THROWS_AS(invert_fourier_d2(std::vector<double>(16, 1.0), 8),
                  std::invalid_argument);
}
