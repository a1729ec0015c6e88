#pragma once

#include "projlen/curve.hpp"
#include "projlen/measure.hpp"
#include "projlen/partition.hpp"

#include <algorithm>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace projlen {

/// Seeded generator for the randomized checks.  Same seed, same objects.
class RandomSource {
public:
  explicit RandomSource(std::uint64_t seed) : eng_(seed) {}

  std::mt19937_64& engine() { return eng_; }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }

  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(eng_);
  }

  bool chance(double p) { return uniform(0.0, 1.0) < p; }

  Vec gaussian_vec(int d) { return detail::gaussian_vec(eng_, d); }

  Vec unit_vec(int d) {
    for (;;) {
      Vec v = gaussian_vec(d);
      const double n = v.norm();
      if (n > 1e-8) return v / n;
    }
  }

  ProjectivePoint point(int d) { return detail::random_projective_point(eng_, d); }

  /// Strictly increasing breakpoints 0 < ... < 1 bounding `pieces` intervals.
  std::vector<double> breaks01(int pieces) {
    std::vector<double> b{0.0, 1.0};
    while (static_cast<int>(b.size()) < pieces + 1) {
      const double t = uniform(0.02, 0.98);
      bool ok = true;
      for (double x : b)
        if (std::abs(x - t) < 1e-3) ok = false;
      if (ok) b.push_back(t);
    }
    std::sort(b.begin(), b.end());
    return b;
  }

  PcvCurve curve(int d, int max_pieces = 6, bool with_zero_intervals = true) {
    const int pieces = uniform_int(1, max_pieces);
    auto breaks = breaks01(pieces);
    std::vector<Vec> vels;
    vels.reserve(pieces);
    for (int i = 0; i < pieces; ++i) {
      if (with_zero_intervals && chance(0.25))
        vels.push_back(Vec::Zero(d));
      else
        vels.push_back(uniform(0.2, 3.0) * unit_vec(d));
    }
    return PcvCurve(d, std::move(breaks), std::move(vels));
  }

  DiscreteMeasure measure(int d, int max_atoms = 8, bool positive = true) {
    const int atoms = uniform_int(1, max_atoms);
    std::vector<Atom> list;
    list.reserve(atoms);
    for (int i = 0; i < atoms; ++i) {
      double w = uniform(0.05, 2.0);
      if (!positive && chance(0.5)) w = -w;
      list.push_back({point(d), w});
    }
    return DiscreteMeasure(d, std::move(list));
  }

  StepFunction step(int max_pieces = 5, double lo = -1.0, double hi = 1.0) {
    const int pieces = uniform_int(1, max_pieces);
    auto breaks = breaks01(pieces);
    std::vector<double> values(pieces);
    for (int i = 0; i < pieces; ++i) values[i] = uniform(lo, hi);
    return StepFunction(std::move(breaks), std::move(values));
  }

  /// Random d = 2 partition: random arc bounds with a tag drawn inside each
  /// arc, norm_bound the exact representative chord diameter.
  TaggedPartition arc_partition(int max_cells = 8) {
    const double pi = std::numbers::pi;
    const int cells = uniform_int(2, max_cells);
    std::vector<double> bounds{0.0, pi};
    while (static_cast<int>(bounds.size()) < cells + 1) {
      const double t = uniform(0.02 * pi, 0.98 * pi);
      bool ok = true;
      for (double x : bounds)
        if (std::abs(x - t) < 0.01) ok = false;
      if (ok) bounds.push_back(t);
    }
    std::sort(bounds.begin(), bounds.end());
    std::vector<ArcCell> arcs(cells);
    std::vector<ProjectivePoint> tags;
    double norm_bound = 0.0;
    for (int i = 0; i < cells; ++i) {
      arcs[i] = {bounds[i], bounds[i + 1]};
      const double w = arcs[i].width();
      norm_bound = std::max(norm_bound, 2.0 * std::sin(0.5 * w));
      tags.push_back(point_at_angle(uniform(bounds[i] + 0.05 * w, bounds[i + 1] - 0.05 * w)));
    }
    return TaggedPartition(std::move(arcs), std::move(tags), norm_bound);
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace projlen
