#pragma once

#include "projlen/curve.hpp"
#include "projlen/lp.hpp"
#include "projlen/partition.hpp"
#include "projlen/projective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace projlen {

struct Atom {
  ProjectivePoint point;
  double weight = 0.0;
};

/// Finite weighted sum of point masses on projective space.  Construction
/// merges atoms whose points coincide (proj_distance below kAtomMergeTol),
/// drops exact-zero weights, and sorts atoms by representative so equal
/// measures have equal structure.
class DiscreteMeasure {
public:
  explicit DiscreteMeasure(int dim) : d_(dim) {
    if (d_ < 2) throw std::invalid_argument("dimension must be >= 2");
  }

  DiscreteMeasure(int dim, std::vector<Atom> atoms) : DiscreteMeasure(dim) {
    for (Atom& a : atoms) {
      if (a.point.dim() != d_) throw std::invalid_argument("dimension mismatch");
      bool merged = false;
      for (Atom& kept : atoms_) {
        if (proj_distance(kept.point, a.point) < kAtomMergeTol) {
          kept.weight += a.weight;
          merged = true;
          break;
        }
      }
      if (!merged) atoms_.push_back(std::move(a));
    }
    std::erase_if(atoms_, [](const Atom& a) { return a.weight == 0.0; });
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) {
      return std::lexicographical_compare(a.point.rep().begin(), a.point.rep().end(),
                                          b.point.rep().begin(), b.point.rep().end());
    });
  }

  int dim() const { return d_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

private:
  int d_ = 0;
  std::vector<Atom> atoms_;
};

/// The measure induced by a curve: one atom per nonzero-velocity interval,
/// weight (t_i - t_{i-1}) |v_i| at the line of v_i.  Total mass is the AC norm.
inline DiscreteMeasure measure_of(const PcvCurve& c) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < c.pieces(); ++i) {
    const Vec& v = c.velocities()[i];
    const double speed = v.norm();
    if (speed == 0.0) continue;
    const double w = (c.breakpoints()[i + 1] - c.breakpoints()[i]) * speed;
    atoms.push_back({ProjectivePoint(v), w});
  }
  return DiscreteMeasure(c.dim(), std::move(atoms));
}

inline DiscreteMeasure add(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) throw std::invalid_argument("dimension mismatch");
  std::vector<Atom> atoms = mu.atoms();
  atoms.insert(atoms.end(), nu.atoms().begin(), nu.atoms().end());
  return DiscreteMeasure(mu.dim(), std::move(atoms));
}

inline DiscreteMeasure scale_measure(const DiscreteMeasure& mu, double k) {
  std::vector<Atom> atoms = mu.atoms();
  for (Atom& a : atoms) a.weight *= k;
  return DiscreteMeasure(mu.dim(), std::move(atoms));
}

inline double total_mass(const DiscreteMeasure& mu) {
  double s = 0.0;
  for (const Atom& a : mu.atoms()) s += a.weight;
  return s;
}

inline double total_variation(const DiscreteMeasure& mu) {
  double s = 0.0;
  for (const Atom& a : mu.atoms()) s += std::abs(a.weight);
  return s;
}

/// Reassigns every atom's weight to the tag of the cell containing it.  Total
/// mass is preserved exactly; throws if an atom falls in no cell.
inline DiscreteMeasure discretize(const DiscreteMeasure& mu, const TaggedPartition& p) {
  if (mu.dim() != p.dim()) throw std::invalid_argument("dimension mismatch");
  std::vector<Atom> atoms;
  atoms.reserve(mu.size());
  for (const Atom& a : mu.atoms())
    atoms.push_back({p.tags()[p.locate(a.point)], a.weight});
  return DiscreteMeasure(mu.dim(), std::move(atoms));
}

/// Witness of the weak-distance optimum: values of the optimal test function
/// at the union support, its sup bound B and Lipschitz bound L (B + L <= 1).
struct WeakDistanceWitness {
  std::vector<ProjectivePoint> support;
  std::vector<double> weights;  // signed weights of mu - nu at the support
  std::vector<double> values;
  double sup_bound = 0.0;
  double lip_bound = 0.0;
  double value = 0.0;
};

/// Distance in the bounded-Lipschitz (weak) norm: the supremum of
/// integral f d(mu - nu) over test functions with sup-norm plus Lipschitz
/// constant at most 1.  For finitely supported measures this collapses to a
/// finite linear program over function values at the union support together
/// with the two scalars; any feasible assignment extends to projective space
/// with the same norm, so the program is exact.
inline double weak_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            WeakDistanceWitness* witness = nullptr) {
  if (mu.dim() != nu.dim()) throw std::invalid_argument("dimension mismatch");
  const DiscreteMeasure diff = add(mu, scale_measure(nu, -1.0));
  const int big_j = static_cast<int>(diff.size());
  if (big_j == 0) {
    if (witness) *witness = {};
    return 0.0;
  }
  // Variables: f_1..f_J, then B at slot J, L at slot J+1.
  const int nvars = big_j + 2;
  const int slot_b = big_j, slot_l = big_j + 1;
  lp::InequalityLp prog(nvars);
  for (int j = 0; j < big_j; ++j) {
    for (int k = j + 1; k < big_j; ++k) {
      const double d = proj_distance(diff.atoms()[j].point, diff.atoms()[k].point);
      prog.add_row({{j, 1.0}, {k, -1.0}, {slot_l, -d}}, 0.0);
      prog.add_row({{j, -1.0}, {k, 1.0}, {slot_l, -d}}, 0.0);
    }
    prog.add_row({{j, 1.0}, {slot_b, -1.0}}, 0.0);
    prog.add_row({{j, -1.0}, {slot_b, -1.0}}, 0.0);
  }
  prog.add_row({{slot_b, 1.0}, {slot_l, 1.0}}, 1.0);
  prog.add_row({{slot_b, -1.0}}, 0.0);
  prog.add_row({{slot_l, -1.0}}, 0.0);

  Eigen::VectorXd c = Eigen::VectorXd::Zero(nvars);
  for (int j = 0; j < big_j; ++j) c[j] = diff.atoms()[j].weight;
  const lp::Result res = prog.maximize(c);
  if (!res.optimal) throw std::runtime_error("weak_distance: LP did not converge");
  if (witness) {
    witness->support.clear();
    witness->weights.clear();
    witness->values.clear();
    for (int j = 0; j < big_j; ++j) {
      witness->support.push_back(diff.atoms()[j].point);
      witness->weights.push_back(diff.atoms()[j].weight);
      witness->values.push_back(res.x[j]);
    }
    witness->sup_bound = res.x[slot_b];
    witness->lip_bound = res.x[slot_l];
    witness->value = res.value;
  }
  return std::max(res.value, 0.0);
}

inline double weak_norm(const DiscreteMeasure& mu) {
  return weak_distance(mu, DiscreteMeasure(mu.dim()));
}

/// Structural equality up to atom matching within kAtomMergeTol and the given
/// weight tolerance.
inline bool approx_equal(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         double weight_tol = 1e-12) {
  if (mu.dim() != nu.dim() || mu.size() != nu.size()) return false;
  std::vector<char> used(nu.size(), 0);
  for (const Atom& a : mu.atoms()) {
    bool found = false;
    for (std::size_t k = 0; k < nu.size(); ++k) {
      if (used[k]) continue;
      if (proj_distance(a.point, nu.atoms()[k].point) < kAtomMergeTol &&
          std::abs(a.weight - nu.atoms()[k].weight) <= weight_tol) {
        used[k] = 1;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace projlen
