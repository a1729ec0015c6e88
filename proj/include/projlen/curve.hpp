#pragma once

#include "projlen/projective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace projlen {

// Breakpoints closer than this merge; the enclosed sliver is absorbed.
inline constexpr double kBreakMergeTol = 1e-12;

/// Bounded piecewise-constant real function on [0, 1], half-open pieces
/// [t_i, t_{i+1}) with the final piece closed at 1.
class StepFunction {
public:
  StepFunction() : breaks_{0.0, 1.0}, values_{0.0} {}

  StepFunction(std::vector<double> breaks, std::vector<double> values) {
    if (breaks.size() != values.size() + 1 || values.empty())
      throw std::invalid_argument("breakpoint/value count mismatch");
    if (std::abs(breaks.front()) > kBreakMergeTol ||
        std::abs(breaks.back() - 1.0) > kBreakMergeTol)
      throw std::invalid_argument("step function domain must be [0, 1]");
    breaks_.push_back(0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double hi = breaks[i + 1];
      if (hi < breaks[i]) throw std::invalid_argument("breakpoints must be increasing");
      if (hi - breaks_.back() <= kBreakMergeTol) {
        if (!values_.empty()) breaks_.back() = hi;
        continue;
      }
      if (!values_.empty() && values_.back() == values[i]) {
        breaks_.back() = hi;
      } else {
        values_.push_back(values[i]);
        breaks_.push_back(hi);
      }
    }
    if (values_.empty()) {
      breaks_ = {0.0, 1.0};
      values_ = {0.0};
      return;
    }
    breaks_.back() = 1.0;
  }

  static StepFunction constant(double v) { return StepFunction({0.0, 1.0}, {v}); }

  static StepFunction indicator(double lo, double hi) {
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0))
      throw std::invalid_argument("indicator interval must sit inside [0, 1]");
    return StepFunction({0.0, lo, hi, 1.0}, {0.0, 1.0, 0.0});
  }

  double operator()(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    std::size_t lo = 0, hi = values_.size();
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (breaks_[mid] <= t)
        lo = mid;
      else
        hi = mid;
    }
    return values_[lo];
  }

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

/// A curve [0,1] -> R^d modulo translation, stored as piecewise-constant
/// velocity on a partition of [0,1].  Broken lines are exactly this class.
/// Construction reduces to normal form: slivers thinner than kBreakMergeTol
/// are absorbed and adjacent intervals with identical velocity vectors merge;
/// zero-velocity intervals are kept.
class PcvCurve {
public:
  PcvCurve() = default;

  PcvCurve(int dim, std::vector<double> breaks, std::vector<Vec> vels) : d_(dim) {
    if (d_ < 1) throw std::invalid_argument("dimension must be positive");
    if (breaks.size() != vels.size() + 1 || vels.empty())
      throw std::invalid_argument("breakpoint/velocity count mismatch");
    if (std::abs(breaks.front()) > kBreakMergeTol ||
        std::abs(breaks.back() - 1.0) > kBreakMergeTol)
      throw std::invalid_argument("parameter interval must be [0, 1]");
    for (const Vec& v : vels)
      if (v.size() != d_) throw std::invalid_argument("dimension mismatch");
    breaks_.push_back(0.0);
    for (std::size_t i = 0; i < vels.size(); ++i) {
      const double hi = breaks[i + 1];
      if (hi < breaks[i]) throw std::invalid_argument("breakpoints must be increasing");
      if (hi - breaks_.back() <= kBreakMergeTol) {
        if (!vels_.empty()) breaks_.back() = hi;
        continue;
      }
      if (!vels_.empty() && (vels_.back().array() == vels[i].array()).all()) {
        breaks_.back() = hi;
      } else {
        vels_.push_back(vels[i]);
        breaks_.push_back(hi);
      }
    }
    if (vels_.empty()) {
      breaks_ = {0.0, 1.0};
      vels_ = {Vec::Zero(d_)};
      return;
    }
    breaks_.back() = 1.0;
  }

  static PcvCurve zero(int dim) {
    return PcvCurve(dim, {0.0, 1.0}, {Vec::Zero(dim)});
  }

  int dim() const { return d_; }
  std::size_t pieces() const { return vels_.size(); }
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<Vec>& velocities() const { return vels_; }

  bool is_zero() const {
    for (const Vec& v : vels_)
      if (v.norm() != 0.0) return false;
    return true;
  }

private:
  int d_ = 0;
  std::vector<double> breaks_;
  std::vector<Vec> vels_;
};

/// Broken line through the given vertices: uniform parameter intervals of
/// width 1/n, velocities n * (A_k - A_{k-1}).
inline PcvCurve from_vertices(const std::vector<Vec>& vertices) {
  if (vertices.size() < 2) throw std::invalid_argument("need at least 2 vertices");
  const int d = static_cast<int>(vertices.front().size());
  const std::size_t n = vertices.size() - 1;
  std::vector<double> breaks(n + 1);
  std::vector<Vec> vels;
  vels.reserve(n);
  for (std::size_t k = 0; k <= n; ++k) breaks[k] = static_cast<double>(k) / n;
  for (std::size_t k = 0; k < n; ++k) {
    if (vertices[k + 1].size() != d) throw std::invalid_argument("dimension mismatch");
    vels.push_back(static_cast<double>(n) * (vertices[k + 1] - vertices[k]));
  }
  return PcvCurve(d, std::move(breaks), std::move(vels));
}

inline double ac_norm(const PcvCurve& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.pieces(); ++i)
    s += (c.breakpoints()[i + 1] - c.breakpoints()[i]) * c.velocities()[i].norm();
  return s;
}

namespace detail {

inline std::vector<double> merge_breakpoints(const std::vector<double>& a,
                                             const std::vector<double>& b) {
  std::vector<double> m;
  m.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
  std::vector<double> out{0.0};
  for (double t : m)
    if (t - out.back() > kBreakMergeTol) out.push_back(t);
  out.back() = 1.0;
  return out;
}

/// Calls body(t_lo, t_hi, index_a, index_b) over the common refinement of the
/// two breakpoint sequences.
template <class Body>
void for_common_refinement(const std::vector<double>& a, const std::vector<double>& b,
                           Body&& body) {
  const auto grid = merge_breakpoints(a, b);
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    while (ia + 2 < a.size() && a[ia + 1] <= grid[k] + kBreakMergeTol) ++ia;
    while (ib + 2 < b.size() && b[ib + 1] <= grid[k] + kBreakMergeTol) ++ib;
    body(grid[k], grid[k + 1], ia, ib);
  }
}

}  // namespace detail

inline double ac_distance(const PcvCurve& a, const PcvCurve& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  double s = 0.0;
  detail::for_common_refinement(
      a.breakpoints(), b.breakpoints(),
      [&](double lo, double hi, std::size_t ia, std::size_t ib) {
        s += (hi - lo) * (a.velocities()[ia] - b.velocities()[ib]).norm();
      });
  return s;
}

/// Concatenation: a on [0, p], b on [p, 1] with p = |a| / (|a| + |b|).  When
/// one side has zero length the other is returned unchanged; when both do, the
/// zero curve is returned and *both_zero (if given) is set.
inline PcvCurve concat(const PcvCurve& a, const PcvCurve& b, bool* both_zero = nullptr) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  if (both_zero) *both_zero = false;
  const double la = ac_norm(a), lb = ac_norm(b);
  if (la + lb == 0.0) {
    if (both_zero) *both_zero = true;
    return PcvCurve::zero(a.dim());
  }
  if (la == 0.0) return b;
  if (lb == 0.0) return a;
  const double p = la / (la + lb);
  std::vector<double> breaks;
  std::vector<Vec> vels;
  breaks.push_back(0.0);
  for (std::size_t i = 0; i < a.pieces(); ++i) {
    breaks.push_back(p * a.breakpoints()[i + 1]);
    vels.push_back(a.velocities()[i] / p);
  }
  breaks.back() = p;
  for (std::size_t i = 0; i < b.pieces(); ++i) {
    breaks.push_back(p + (1.0 - p) * b.breakpoints()[i + 1]);
    vels.push_back(b.velocities()[i] / (1.0 - p));
  }
  breaks.back() = 1.0;
  return PcvCurve(a.dim(), std::move(breaks), std::move(vels));
}

inline PcvCurve reverse(const PcvCurve& c) {
  std::vector<double> breaks;
  std::vector<Vec> vels;
  breaks.push_back(0.0);
  for (std::size_t i = c.pieces(); i-- > 0;) {
    breaks.push_back(1.0 - c.breakpoints()[i]);
    vels.push_back(-c.velocities()[i]);
  }
  return PcvCurve(c.dim(), std::move(breaks), std::move(vels));
}

inline PcvCurve scale(const PcvCurve& c, double k) {
  std::vector<Vec> vels;
  vels.reserve(c.pieces());
  for (const Vec& v : c.velocities()) vels.push_back(k * v);
  return PcvCurve(c.dim(), c.breakpoints(), std::move(vels));
}

/// Position at parameter t, anchored so the curve starts at the origin.
inline Vec point_at(const PcvCurve& c, double t) {
  t = std::clamp(t, 0.0, 1.0);
  Vec pos = Vec::Zero(c.dim());
  for (std::size_t i = 0; i < c.pieces(); ++i) {
    const double lo = c.breakpoints()[i], hi = c.breakpoints()[i + 1];
    if (t <= lo) break;
    pos += (std::min(t, hi) - lo) * c.velocities()[i];
  }
  return pos;
}

inline std::vector<Vec> breakpoint_positions(const PcvCurve& c) {
  std::vector<Vec> out;
  out.reserve(c.pieces() + 1);
  Vec pos = Vec::Zero(c.dim());
  out.push_back(pos);
  for (std::size_t i = 0; i < c.pieces(); ++i) {
    pos += (c.breakpoints()[i + 1] - c.breakpoints()[i]) * c.velocities()[i];
    out.push_back(pos);
  }
  return out;
}

/// Normalized cumulative measure of the moving set E = {t : velocity != 0}:
/// piecewise-linear, nondecreasing, 0 at 0 and 1 at 1.
struct PiecewiseCdf {
  std::vector<double> t;
  std::vector<double> value;

  double operator()(double x) const {
    if (x <= t.front()) return value.front();
    if (x >= t.back()) return value.back();
    std::size_t lo = 0, hi = t.size() - 1;
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (t[mid] <= x)
        lo = mid;
      else
        hi = mid;
    }
    const double w = t[lo + 1] - t[lo];
    if (w <= 0.0) return value[lo + 1];
    const double u = (x - t[lo]) / w;
    return value[lo] + u * (value[lo + 1] - value[lo]);
  }
};

struct QuantileSegment {
  double s_lo = 0.0, s_hi = 0.0;  // consecutive segments share s endpoints
  double t_lo = 0.0, t_hi = 0.0;
};

/// Right inverse of the cdf: strictly increasing, right-continuous, with jumps
/// across the zero-velocity gaps.  Evaluation at a shared s endpoint takes the
/// later segment, which is exactly right-continuity.
struct QuantileMap {
  std::vector<QuantileSegment> segments;

  double operator()(double s) const {
    s = std::clamp(s, 0.0, 1.0);
    std::size_t lo = 0, hi = segments.size();
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (segments[mid].s_lo <= s)
        lo = mid;
      else
        hi = mid;
    }
    const QuantileSegment& seg = segments[lo];
    const double w = seg.s_hi - seg.s_lo;
    if (w <= 0.0) return seg.t_lo;
    const double u = (s - seg.s_lo) / w;
    return seg.t_lo + u * (seg.t_hi - seg.t_lo);
  }

  /// (s, gap length) for each jump, interior and trailing.
  std::vector<std::pair<double, double>> jumps() const {
    std::vector<std::pair<double, double>> out;
    for (std::size_t r = 1; r < segments.size(); ++r) {
      const double gap = segments[r].t_lo - segments[r - 1].t_hi;
      if (gap > 0.0) out.emplace_back(segments[r].s_lo, gap);
    }
    return out;
  }
};

struct SupportTables {
  PiecewiseCdf cdf;
  QuantileMap quantile;
  double support_measure = 0.0;  // Lebesgue measure of E
  bool degenerate = false;       // velocity vanishes a.e.; identity maps returned
};

/// The cdf of the nonzero-velocity set and its right inverse.  All arithmetic
/// is exact sums over interval lengths.
inline SupportTables support_tables(const PcvCurve& c) {
  SupportTables out;
  const auto& breaks = c.breakpoints();
  const auto& vels = c.velocities();
  std::vector<double> cum(breaks.size(), 0.0);
  for (std::size_t i = 0; i < vels.size(); ++i) {
    const double w = (vels[i].norm() > 0.0) ? breaks[i + 1] - breaks[i] : 0.0;
    cum[i + 1] = cum[i] + w;
  }
  const double lambda = cum.back();
  out.support_measure = lambda;
  if (lambda == 0.0) {
    out.degenerate = true;
    out.cdf = PiecewiseCdf{{0.0, 1.0}, {0.0, 1.0}};
    out.quantile.segments = {{0.0, 1.0, 0.0, 1.0}};
    return out;
  }
  out.cdf.t = breaks;
  out.cdf.value.resize(cum.size());
  for (std::size_t i = 0; i < cum.size(); ++i) out.cdf.value[i] = cum[i] / lambda;
  out.cdf.value.back() = 1.0;

  std::size_t i = 0;
  while (i < vels.size()) {
    if (vels[i].norm() == 0.0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < vels.size() && vels[j].norm() > 0.0) ++j;
    out.quantile.segments.push_back(
        {out.cdf.value[i], out.cdf.value[j], breaks[i], breaks[j]});
    i = j;
  }
  out.quantile.segments.back().s_hi = 1.0;
  if (out.quantile.segments.back().t_hi < 1.0)
    out.quantile.segments.push_back({1.0, 1.0, 1.0, 1.0});  // trailing gap marker
  return out;
}

/// Constant-speed reparametrization.  Zero-velocity time is deleted through
/// the quantile map (velocities scale by the support measure), then the speed
/// is normalized through the arc-length profile.  Output speed equals the AC
/// norm on every piece; the induced measure and the AC norm are unchanged.
inline PcvCurve constant_speed_reparam(const PcvCurve& c, bool* degenerate = nullptr) {
  if (degenerate) *degenerate = false;
  const auto tables = support_tables(c);
  if (tables.degenerate) {
    if (degenerate) *degenerate = true;
    return PcvCurve::zero(c.dim());
  }
  const double lambda = tables.support_measure;
  // Stage 1: compose with the quantile map; one piece per nonzero interval.
  std::vector<double> widths;
  std::vector<Vec> vels;
  for (std::size_t i = 0; i < c.pieces(); ++i) {
    if (c.velocities()[i].norm() == 0.0) continue;
    widths.push_back((c.breakpoints()[i + 1] - c.breakpoints()[i]) / lambda);
    vels.push_back(lambda * c.velocities()[i]);
  }
  // Stage 2: normalize speed by inverting the arc-length profile.
  std::vector<double> cum(widths.size() + 1, 0.0);
  for (std::size_t i = 0; i < widths.size(); ++i)
    cum[i + 1] = cum[i] + widths[i] * vels[i].norm();
  const double total = cum.back();
  std::vector<double> breaks(cum.size());
  std::vector<Vec> out_vels(widths.size());
  for (std::size_t i = 0; i < cum.size(); ++i) breaks[i] = cum[i] / total;
  breaks.back() = 1.0;
  for (std::size_t i = 0; i < widths.size(); ++i)
    out_vels[i] = (total / vels[i].norm()) * vels[i];
  return PcvCurve(c.dim(), std::move(breaks), std::move(out_vels));
}

/// Composition with a monotone, surjective, piecewise-linear time change
/// given by nodes (s_k, t_k): s strictly increasing 0..1, t nondecreasing 0..1.
inline PcvCurve compose_time_change(const PcvCurve& c, const std::vector<double>& s_nodes,
                                    const std::vector<double>& t_nodes) {
  if (s_nodes.size() != t_nodes.size() || s_nodes.size() < 2)
    throw std::invalid_argument("time change needs matching node lists");
  if (std::abs(s_nodes.front()) > kBreakMergeTol ||
      std::abs(s_nodes.back() - 1.0) > kBreakMergeTol ||
      std::abs(t_nodes.front()) > kBreakMergeTol ||
      std::abs(t_nodes.back() - 1.0) > kBreakMergeTol)
    throw std::invalid_argument("time change must map [0,1] onto [0,1]");
  std::vector<double> breaks{0.0};
  std::vector<Vec> vels;
  for (std::size_t j = 0; j + 1 < s_nodes.size(); ++j) {
    const double s0 = s_nodes[j], s1 = s_nodes[j + 1];
    const double t0 = t_nodes[j], t1 = t_nodes[j + 1];
    if (s1 <= s0) throw std::invalid_argument("s nodes must be strictly increasing");
    if (t1 < t0) throw std::invalid_argument("time change must be nondecreasing");
    if (t1 - t0 <= 0.0) {
      breaks.push_back(s1);
      vels.push_back(Vec::Zero(c.dim()));
      continue;
    }
    const double slope = (t1 - t0) / (s1 - s0);
    for (std::size_t i = 0; i < c.pieces(); ++i) {
      const double a = std::max(t0, c.breakpoints()[i]);
      const double b = std::min(t1, c.breakpoints()[i + 1]);
      if (b <= a) continue;
      breaks.push_back(s0 + (b - t0) / slope);
      vels.push_back(slope * c.velocities()[i]);
    }
    breaks.back() = s1;
  }
  breaks.back() = 1.0;
  return PcvCurve(c.dim(), std::move(breaks), std::move(vels));
}

/// Modulation x * c: the constant-speed reparametrization of the curve with
/// velocity x(t) c'(t).  Its AC norm is the integral of |x| |c'|.
inline PcvCurve modulate(const StepFunction& x, const PcvCurve& c,
                         bool* degenerate = nullptr) {
  std::vector<double> breaks{0.0};
  std::vector<Vec> vels;
  detail::for_common_refinement(
      x.breakpoints(), c.breakpoints(),
      [&](double /*lo*/, double hi, std::size_t ix, std::size_t ic) {
        breaks.push_back(hi);
        vels.push_back(x.values()[ix] * c.velocities()[ic]);
      });
  breaks.back() = 1.0;
  PcvCurve raw(c.dim(), std::move(breaks), std::move(vels));
  return constant_speed_reparam(raw, degenerate);
}

inline bool approx_equal(const PcvCurve& a, const PcvCurve& b, double tol = 1e-12) {
  if (a.dim() != b.dim() || a.pieces() != b.pieces()) return false;
  for (std::size_t i = 0; i < a.breakpoints().size(); ++i)
    if (std::abs(a.breakpoints()[i] - b.breakpoints()[i]) > tol) return false;
  for (std::size_t i = 0; i < a.pieces(); ++i)
    if ((a.velocities()[i] - b.velocities()[i]).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

}  // namespace projlen
