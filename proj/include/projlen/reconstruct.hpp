#pragma once

#include "projlen/curve.hpp"
#include "projlen/measure.hpp"
#include "projlen/partition.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace projlen {

namespace detail {

/// Per-interval cell assignment of a curve's velocity directions: cell index
/// (or npos for zero velocity) and the sign relating the velocity to the
/// canonical representative.
struct VelocityCells {
  std::vector<std::size_t> cell;
  std::vector<double> sign;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

inline VelocityCells assign_cells(const TaggedPartition& p, const PcvCurve& c) {
  VelocityCells out;
  out.cell.resize(c.pieces(), VelocityCells::npos);
  out.sign.resize(c.pieces(), 0.0);
  for (std::size_t i = 0; i < c.pieces(); ++i) {
    const Vec& v = c.velocities()[i];
    if (v.norm() == 0.0) continue;
    const ProjectivePoint line(v);
    out.cell[i] = p.locate(line);
    out.sign[i] = (v.dot(line.rep()) > 0.0) ? 1.0 : -1.0;
  }
  return out;
}

}  // namespace detail

/// Indicator decomposition of a curve against one cell: +1 where the velocity
/// is a positive multiple of a canonical representative in the cell, -1 where
/// a negative multiple, 0 elsewhere.  Summing |h_i| over all cells gives 1
/// wherever the velocity is nonzero.
inline StepFunction h_indicator(const TaggedPartition& p, const PcvCurve& c,
                                std::size_t cell) {
  if (p.dim() != c.dim()) throw std::invalid_argument("dimension mismatch");
  if (cell >= p.size()) throw std::invalid_argument("cell index out of range");
  const auto cells = detail::assign_cells(p, c);
  std::vector<double> values(c.pieces(), 0.0);
  for (std::size_t i = 0; i < c.pieces(); ++i)
    if (cells.cell[i] == cell) values[i] = cells.sign[i];
  return StepFunction(c.breakpoints(), values);
}

/// The rearrangement operator: concatenation over cells, in partition order,
/// of the modulations h_i * c.  Constant speed, same induced measure; within
/// the i-th block every velocity direction is a canonical representative lying
/// in the i-th cell.
inline PcvCurve rearrange(const TaggedPartition& p, const PcvCurve& c) {
  if (p.dim() != c.dim()) throw std::invalid_argument("dimension mismatch");
  if (ac_norm(c) == 0.0) return PcvCurve::zero(c.dim());
  const auto cells = detail::assign_cells(p, c);
  PcvCurve out = PcvCurve::zero(c.dim());
  for (std::size_t cell = 0; cell < p.size(); ++cell) {
    std::vector<double> values(c.pieces(), 0.0);
    bool hit = false;
    for (std::size_t i = 0; i < c.pieces(); ++i) {
      if (cells.cell[i] == cell) {
        values[i] = cells.sign[i];
        hit = true;
      }
    }
    if (!hit) continue;
    const PcvCurve piece = modulate(StepFunction(c.breakpoints(), values), c);
    out = concat(out, piece);
  }
  return out;
}

/// Broken line with arc length mu(U_i) along the canonical representative of
/// each tag, cells in partition order, zero-mass cells skipped.  Right inverse
/// of measure_of at the discrete level.
inline PcvCurve right_inverse(const TaggedPartition& p, const DiscreteMeasure& mu) {
  if (p.dim() != mu.dim()) throw std::invalid_argument("dimension mismatch");
  std::vector<double> cell_mass(p.size(), 0.0);
  for (const Atom& a : mu.atoms()) {
    if (a.weight < 0.0) throw std::invalid_argument("negative cell mass");
    cell_mass[p.locate(a.point)] += a.weight;
  }
  double total = 0.0;
  for (double w : cell_mass) total += w;
  if (total == 0.0) return PcvCurve::zero(p.dim());
  std::vector<double> breaks{0.0};
  std::vector<Vec> vels;
  double cum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (cell_mass[i] == 0.0) continue;
    cum += cell_mass[i];
    breaks.push_back(cum / total);
    vels.push_back(total * p.tags()[i].rep());
  }
  breaks.back() = 1.0;
  return PcvCurve(p.dim(), std::move(breaks), std::move(vels));
}

/// The broken-line approximation of the rearrangement of c.
inline PcvCurve broken_line_approx(const TaggedPartition& p, const PcvCurve& c) {
  return right_inverse(p, measure_of(c));
}

/// Record of one rearrangement: per-cell arc lengths (these equal the cell
/// masses of the induced measure) and the deviation of the cell's directions
/// from its tag actually achieved.
struct RearrangementReport {
  std::string curve_id;
  std::string partition_id;
  std::vector<double> cell_arc_length;
  std::vector<double> cell_deviation;  // max |dir - tag| over the cell's pieces
  double norm_bound = 0.0;
  double total_length = 0.0;
};

inline RearrangementReport rearrangement_report(const TaggedPartition& p,
                                                const PcvCurve& c,
                                                std::string curve_id = {},
                                                std::string partition_id = {}) {
  if (p.dim() != c.dim()) throw std::invalid_argument("dimension mismatch");
  RearrangementReport rep;
  rep.curve_id = std::move(curve_id);
  rep.partition_id = std::move(partition_id);
  rep.norm_bound = p.norm_bound();
  rep.total_length = ac_norm(c);
  rep.cell_arc_length.assign(p.size(), 0.0);
  rep.cell_deviation.assign(p.size(), 0.0);
  const auto cells = detail::assign_cells(p, c);
  for (std::size_t i = 0; i < c.pieces(); ++i) {
    if (cells.cell[i] == detail::VelocityCells::npos) continue;
    const std::size_t cell = cells.cell[i];
    const Vec& v = c.velocities()[i];
    rep.cell_arc_length[cell] +=
        (c.breakpoints()[i + 1] - c.breakpoints()[i]) * v.norm();
    const double dev = (ProjectivePoint(v).rep() - p.tags()[cell].rep()).norm();
    rep.cell_deviation[cell] = std::max(rep.cell_deviation[cell], dev);
  }
  return rep;
}

struct SurjectivityLevel {
  std::size_t cells = 0;
  double norm_bound = 0.0;
  double weak_dist = 0.0;  // distance from the level's induced measure to mu
};

/// Certificate data for the refinement sequence toward a target measure.
struct SurjectivityResult {
  std::vector<PcvCurve> curves;  // one per level, the base partition first
  std::vector<SurjectivityLevel> levels;
  double cauchy_bound = 0.0;     // coarsest-level bound: |p_0| mass
  double cauchy_achieved = 0.0;  // max over pairs of the realized AC distance
  bool certificate_ok = false;   // every pair satisfied its level bound
};

/// Builds the refinement sequence p_0, p_1, ... (ordered refinements by the
/// given factor) and the broken lines alpha_k = right_inverse(p_k, mu),
/// then certifies |alpha_k - alpha_l|_AC <= |p_k| mass for k <= l and the
/// per-level weak-distance bound |p_k| mass.
inline SurjectivityResult surjectivity_sequence(const DiscreteMeasure& mu,
                                                const TaggedPartition& p0, int levels,
                                                int factor) {
  if (levels < 1) throw std::invalid_argument("need at least one refinement level");
  if (factor < 2) throw std::invalid_argument("refinement factor must be >= 2");
  for (const Atom& a : mu.atoms())
    if (a.weight <= 0.0) throw std::invalid_argument("non-positive weights");
  if (mu.empty()) throw std::invalid_argument("empty measure");

  const double mass = total_mass(mu);
  SurjectivityResult out;
  std::vector<double> bounds;
  TaggedPartition p = p0;
  for (int k = 0; k <= levels; ++k) {
    if (k > 0) p = refine(p, factor);
    out.curves.push_back(right_inverse(p, mu));
    const double wd = weak_distance(measure_of(out.curves.back()), mu);
    out.levels.push_back({p.size(), p.norm_bound(), wd});
    bounds.push_back(p.norm_bound() * mass);
  }
  out.cauchy_bound = bounds.front();
  out.certificate_ok = true;
  const double slack = 1e-9;
  for (std::size_t k = 0; k < out.curves.size(); ++k) {
    for (std::size_t l = k + 1; l < out.curves.size(); ++l) {
      const double dist = ac_distance(out.curves[k], out.curves[l]);
      out.cauchy_achieved = std::max(out.cauchy_achieved, dist);
      if (dist > bounds[k] + slack) out.certificate_ok = false;
    }
    if (out.levels[k].weak_dist > bounds[k] + slack) out.certificate_ok = false;
  }
  return out;
}

}  // namespace projlen
