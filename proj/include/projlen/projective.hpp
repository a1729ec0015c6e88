#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace projlen {

using Vec = Eigen::VectorXd;

// Coordinates with absolute value below this are treated as exact zeros when
// selecting the canonical sign of a representative.
inline constexpr double kCoordZeroTol = 1e-12;

// Projective points closer than this (in proj_distance) denote the same atom.
inline constexpr double kAtomMergeTol = 1e-10;

/// A line through the origin in R^d (d >= 2), stored as the unit vector
/// representative whose last nonzero coordinate is positive.  That set of
/// representatives meets every line exactly once, so equality of lines is
/// equality of representatives.
class ProjectivePoint {
public:
  explicit ProjectivePoint(const Vec& direction) {
    if (direction.size() < 2)
      throw std::invalid_argument("projective point needs dimension >= 2");
    const double n = direction.norm();
    if (n == 0.0) throw std::invalid_argument("zero direction");
    rep_ = direction / n;
    Eigen::Index last = -1;
    for (Eigen::Index i = rep_.size() - 1; i >= 0; --i) {
      if (std::abs(rep_[i]) >= kCoordZeroTol) {
        last = i;
        break;
      }
    }
    if (last < 0) throw std::invalid_argument("zero direction");
    if (rep_[last] < 0.0) rep_ = -rep_;
  }

  const Vec& rep() const { return rep_; }
  int dim() const { return static_cast<int>(rep_.size()); }

private:
  Vec rep_;
};

inline ProjectivePoint canonical_lift(const Vec& v) { return ProjectivePoint(v); }

/// Chord metric on projective space: the shorter of the two chords between
/// representatives.  Symmetric, satisfies the triangle inequality, maximum
/// value sqrt(2).
inline double proj_distance(const ProjectivePoint& x, const ProjectivePoint& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("dimension mismatch");
  return std::min((x.rep() - y.rep()).norm(), (x.rep() + y.rep()).norm());
}

/// Degree-1 homogeneous (even) extension of a function on projective space:
/// |w| * f([w]) away from the origin, 0 at the origin.
template <class F>
double hat_extend(F&& f, const Vec& w) {
  const double n = w.norm();
  if (n == 0.0) return 0.0;
  return n * f(ProjectivePoint(w));
}

/// d = 2 only: the angle in [0, pi) of the canonical representative.
inline double rep_angle(const ProjectivePoint& p) {
  if (p.dim() != 2) throw std::invalid_argument("rep_angle requires d = 2");
  const Vec& r = p.rep();
  if (std::abs(r[1]) < kCoordZeroTol) return 0.0;
  return std::atan2(r[1], r[0]);
}

inline ProjectivePoint point_at_angle(double theta) {
  Vec v(2);
  v << std::cos(theta), std::sin(theta);
  return ProjectivePoint(v);
}

}  // namespace projlen
