#pragma once

#include "projlen/cosine.hpp"
#include "projlen/random.hpp"
#include "projlen/reconstruct.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace projlen {

/// Outcome of one randomized invariant check.  worst_margin is the smallest
/// slack (bound plus admitted tolerance minus achieved value) seen across the
/// trials; negative margins are failures.
struct CheckResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst_margin = std::numeric_limits<double>::infinity();

  bool pass() const { return failures == 0; }

  void record(double margin) {
    ++trials;
    worst_margin = std::min(worst_margin, margin);
    if (margin < 0.0) ++failures;
  }
};

namespace detail {

/// Max weight discrepancy under greedy atom matching; +inf when the supports
/// do not match within kAtomMergeTol.
inline double measure_discrepancy(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const double inf = std::numeric_limits<double>::infinity();
  if (mu.dim() != nu.dim() || mu.size() != nu.size()) return inf;
  std::vector<char> used(nu.size(), 0);
  double worst = 0.0;
  for (const Atom& a : mu.atoms()) {
    std::size_t pick = nu.size();
    double best = kAtomMergeTol;
    for (std::size_t k = 0; k < nu.size(); ++k) {
      if (used[k]) continue;
      const double d = proj_distance(a.point, nu.atoms()[k].point);
      if (d < best) {
        best = d;
        pick = k;
      }
    }
    if (pick == nu.size()) return inf;
    used[pick] = 1;
    worst = std::max(worst, std::abs(a.weight - nu.atoms()[pick].weight));
  }
  return worst;
}

}  // namespace detail

/// |mu_a - mu_b|_w <= |a - b|_AC for curves.
inline CheckResult check_measure_continuity(RandomSource& rng, int trials) {
  CheckResult res{"curve-measure continuity"};
  for (int t = 0; t < trials; ++t) {
    const int d = rng.chance(0.5) ? 2 : 3;
    const PcvCurve a = rng.curve(d), b = rng.curve(d);
    const double lhs = weak_distance(measure_of(a), measure_of(b));
    res.record(ac_distance(a, b) + 1e-9 - lhs);
  }
  return res;
}

/// sup_xi |M_mu - M_nu| <= 2 |mu - nu|_w over sampled directions.
inline CheckResult check_transform_continuity(RandomSource& rng, int trials,
                                              int directions = 360) {
  CheckResult res{"transform continuity"};
  for (int t = 0; t < trials; ++t) {
    const int d = rng.chance(0.7) ? 2 : 3;
    const DiscreteMeasure mu = rng.measure(d), nu = rng.measure(d);
    double sup = 0.0;
    for (int k = 0; k < directions; ++k) {
      Vec xi;
      if (d == 2) {
        const double th = (k * std::numbers::pi) / directions;
        xi = Vec(2);
        xi << std::cos(th), std::sin(th);
      } else {
        xi = rng.unit_vec(d);
      }
      sup = std::max(sup, std::abs(forward_discrete(mu, xi) - forward_discrete(nu, xi)));
    }
    res.record(2.0 * weak_distance(mu, nu) + 1e-9 - sup);
  }
  return res;
}

/// |mu - discretize(mu, p)|_w <= norm_bound(p) * |mu|(P).
inline CheckResult check_discretization_bound(
    RandomSource& rng, int trials, const std::vector<TaggedPartition>& extra = {}) {
  CheckResult res{"discretization bound"};
  for (int t = 0; t < trials; ++t) {
    const bool use_extra = !extra.empty() && rng.chance(0.3);
    const TaggedPartition p =
        use_extra ? extra[rng.uniform_int(0, static_cast<int>(extra.size()) - 1)]
                  : rng.arc_partition();
    const DiscreteMeasure mu = rng.measure(p.dim(), 8, rng.chance(0.5));
    const double lhs = weak_distance(mu, discretize(mu, p));
    res.record(p.norm_bound() * total_variation(mu) + 1e-9 - lhs);
  }
  return res;
}

/// Constant-speed reparametrization: speed within 1e-10 of the AC norm on
/// every piece, AC norm within 1e-12, induced measure preserved.
inline CheckResult check_constant_speed(RandomSource& rng, int trials) {
  CheckResult res{"constant-speed reparametrization"};
  for (int t = 0; t < trials; ++t) {
    const int d = rng.chance(0.5) ? 2 : 3;
    const PcvCurve c = rng.curve(d, 7, true);
    bool degenerate = false;
    const PcvCurve r = constant_speed_reparam(c, &degenerate);
    const double len = ac_norm(c);
    if (degenerate) {
      res.record(len == 0.0 ? 0.0 : -1.0);
      continue;
    }
    double margin = 1e-12 - std::abs(ac_norm(r) - len);
    for (const Vec& v : r.velocities())
      margin = std::min(margin, 1e-10 - std::abs(v.norm() - len));
    margin = std::min(margin,
                      1e-12 - detail::measure_discrepancy(measure_of(c), measure_of(r)));
    res.record(margin);
  }
  return res;
}

/// Recombination: |x| + |y| = 1 a.e. implies mu_{x*a (+) y*a} = mu_a.
inline CheckResult check_recombination(RandomSource& rng, int trials) {
  CheckResult res{"recombination"};
  for (int t = 0; t < trials; ++t) {
    const int d = rng.chance(0.5) ? 2 : 3;
    const PcvCurve c = rng.curve(d, 6, false);
    const StepFunction x = rng.step(5, -1.0, 1.0);
    std::vector<double> yv(x.values().size());
    for (std::size_t i = 0; i < yv.size(); ++i) {
      const double mag = 1.0 - std::abs(x.values()[i]);
      yv[i] = rng.chance(0.5) ? mag : -mag;
    }
    const StepFunction y(x.breakpoints(), yv);
    const PcvCurve combined = concat(modulate(x, c), modulate(y, c));
    res.record(1e-12 - detail::measure_discrepancy(measure_of(combined), measure_of(c)));
  }
  return res;
}

/// Indicator rearrangement: for a partition {U_i} of [0,1] into step classes,
/// mu of the concatenation of the chi_{U_i} * a equals mu_a.
inline CheckResult check_indicator_rearrangement(RandomSource& rng, int trials) {
  CheckResult res{"indicator rearrangement"};
  for (int t = 0; t < trials; ++t) {
    const int d = rng.chance(0.5) ? 2 : 3;
    const PcvCurve c = rng.curve(d, 6, false);
    const int pieces = rng.uniform_int(2, 7);
    const int classes = rng.uniform_int(2, 4);
    const auto breaks = rng.breaks01(pieces);
    std::vector<int> owner(pieces);
    for (int i = 0; i < pieces; ++i) owner[i] = rng.uniform_int(0, classes - 1);
    PcvCurve combined = PcvCurve::zero(d);
    for (int cls = 0; cls < classes; ++cls) {
      std::vector<double> values(pieces, 0.0);
      for (int i = 0; i < pieces; ++i)
        if (owner[i] == cls) values[i] = 1.0;
      combined = concat(combined, modulate(StepFunction(breaks, values), c));
    }
    res.record(1e-12 - detail::measure_discrepancy(measure_of(combined), measure_of(c)));
  }
  return res;
}

/// Two broken lines built from the same multiset of segments (any order, sign
/// flips, subdivisions) induce the same measure.
inline CheckResult check_rearrangement_equivalence(RandomSource& rng, int trials) {
  CheckResult res{"rearrangement equivalence"};
  for (int t = 0; t < trials; ++t) {
    const int d = rng.chance(0.5) ? 2 : 3;
    const int segments = rng.uniform_int(1, 20);
    std::vector<Vec> segs;
    segs.reserve(segments);
    for (int i = 0; i < segments; ++i) segs.push_back(rng.uniform(0.1, 2.0) * rng.unit_vec(d));

    auto build = [&](const std::vector<Vec>& pieces) {
      std::vector<Vec> vertices{Vec::Zero(d)};
      for (const Vec& s : pieces) vertices.push_back(vertices.back() + s);
      return from_vertices(vertices);
    };

    const PcvCurve base = build(segs);
    for (int variant = 0; variant < 3; ++variant) {
      std::vector<Vec> shuffled;
      for (const Vec& s : segs) {
        if (rng.chance(0.3)) {
          const double cut = rng.uniform(0.2, 0.8);
          shuffled.push_back(cut * s);
          shuffled.push_back((1.0 - cut) * s);
        } else {
          shuffled.push_back(s);
        }
      }
      std::shuffle(shuffled.begin(), shuffled.end(), rng.engine());
      for (Vec& s : shuffled)
        if (rng.chance(0.5)) s = -s;
      res.record(1e-12 - detail::measure_discrepancy(measure_of(base),
                                                     measure_of(build(shuffled))));
    }
  }
  return res;
}

/// The two partition inequalities: |F_P - G_P|_AC and |F_P - F_Q|_AC are both
/// bounded by norm_bound(P) |c|_AC for Q an ordered refinement of P.
inline CheckResult check_partition_inequalities(
    RandomSource& rng, int trials,
    const std::vector<std::pair<TaggedPartition, TaggedPartition>>& extra = {}) {
  CheckResult res{"rearrangement inequalities"};
  for (int t = 0; t < trials; ++t) {
    const bool use_extra = !extra.empty() && rng.chance(0.3);
    std::pair<TaggedPartition, TaggedPartition> pick =
        use_extra ? extra[rng.uniform_int(0, static_cast<int>(extra.size()) - 1)]
                  : std::pair<TaggedPartition, TaggedPartition>{
                        rng.arc_partition(6), uniform_partition(2, 2)};
    if (!use_extra) pick.second = refine(pick.first, rng.uniform_int(2, 3));
    const TaggedPartition& p = pick.first;
    const TaggedPartition& q = pick.second;
    const PcvCurve c = rng.curve(p.dim(), 6, true);
    if (ac_norm(c) == 0.0) {
      res.record(0.0);
      continue;
    }
    const double bound = p.norm_bound() * ac_norm(c) + 1e-9;
    const PcvCurve fp = rearrange(p, c);
    const PcvCurve gp = broken_line_approx(p, c);
    const PcvCurve fq = rearrange(q, c);
    res.record(std::min(bound - ac_distance(fp, gp), bound - ac_distance(fp, fq)));
  }
  return res;
}

/// forward_curve equals forward_discrete of the induced measure.
inline CheckResult check_transform_consistency(RandomSource& rng, int trials) {
  CheckResult res{"transform consistency"};
  for (int t = 0; t < trials; ++t) {
    const int d = rng.chance(0.5) ? 2 : 3;
    const PcvCurve c = rng.curve(d);
    const DiscreteMeasure mu = measure_of(c);
    const Vec xi = rng.unit_vec(d);
    res.record(1e-12 - std::abs(forward_curve(c, xi) - forward_discrete(mu, xi)));
  }
  return res;
}

/// Monotone surjective piecewise-linear time changes preserve the measure.
inline CheckResult check_reparam_invariance(RandomSource& rng, int trials) {
  CheckResult res{"reparametrization invariance"};
  for (int t = 0; t < trials; ++t) {
    const int d = rng.chance(0.5) ? 2 : 3;
    const PcvCurve c = rng.curve(d, 5, false);
    const int pieces = rng.uniform_int(2, 5);
    const auto s_nodes = rng.breaks01(pieces);
    std::vector<double> inc(pieces);
    double total = 0.0;
    for (int i = 0; i < pieces; ++i) {
      inc[i] = rng.chance(0.25) ? 0.0 : rng.uniform(0.1, 1.0);
      total += inc[i];
    }
    if (total == 0.0) {
      inc[0] = 1.0;
      total = 1.0;
    }
    std::vector<double> t_nodes{0.0};
    for (int i = 0; i < pieces; ++i) t_nodes.push_back(t_nodes.back() + inc[i] / total);
    t_nodes.back() = 1.0;
    const PcvCurve moved = compose_time_change(c, s_nodes, t_nodes);
    res.record(1e-12 - detail::measure_discrepancy(measure_of(moved), measure_of(c)));
  }
  return res;
}

/// Weak distance is a metric: symmetry and the triangle inequality.
inline CheckResult check_weak_metric(RandomSource& rng, int trials) {
  CheckResult res{"weak metric"};
  for (int t = 0; t < trials; ++t) {
    const int d = rng.chance(0.5) ? 2 : 3;
    const DiscreteMeasure a = rng.measure(d, 5, rng.chance(0.5));
    const DiscreteMeasure b = rng.measure(d, 5, rng.chance(0.5));
    const DiscreteMeasure c = rng.measure(d, 5, rng.chance(0.5));
    const double ab = weak_distance(a, b), ba = weak_distance(b, a);
    const double ac = weak_distance(a, c), cb = weak_distance(c, b);
    const double margin =
        std::min(1e-9 - std::abs(ab - ba), ac + cb + 1e-9 - ab);
    res.record(margin);
  }
  return res;
}

/// The full battery with shared partition pools for d = 3.
inline std::vector<CheckResult> run_all_checks(std::uint64_t seed, int trials) {
  RandomSource rng(seed);
  std::vector<TaggedPartition> pool3;
  pool3.push_back(uniform_partition(3, 4));
  pool3.push_back(uniform_partition(3, 8));
  std::vector<std::pair<TaggedPartition, TaggedPartition>> pairs3;
  for (const auto& p : pool3) pairs3.emplace_back(p, refine(p, 2));

  std::vector<CheckResult> out;
  out.push_back(check_measure_continuity(rng, trials));
  out.push_back(check_transform_continuity(rng, std::max(1, trials / 2)));
  out.push_back(check_discretization_bound(rng, trials, pool3));
  out.push_back(check_constant_speed(rng, trials));
  out.push_back(check_recombination(rng, trials));
  out.push_back(check_indicator_rearrangement(rng, trials));
  out.push_back(check_rearrangement_equivalence(rng, std::max(1, trials / 2)));
  out.push_back(check_partition_inequalities(rng, trials, pairs3));
  out.push_back(check_transform_consistency(rng, trials));
  out.push_back(check_reparam_invariance(rng, trials));
  out.push_back(check_weak_metric(rng, std::max(1, trials / 4)));
  return out;
}

}  // namespace projlen
