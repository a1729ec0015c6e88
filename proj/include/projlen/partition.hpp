#pragma once

#include "projlen/projective.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace projlen {

/// Half-open angle interval [lo, hi) in [0, pi); the cell model for d = 2.
struct ArcCell {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return mix_seed(a ^ mix_seed(b));
}

inline Vec gaussian_vec(std::mt19937_64& eng, int d) {
  std::normal_distribution<double> gauss;
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = gauss(eng);
  return v;
}

inline ProjectivePoint random_projective_point(std::mt19937_64& eng, int d) {
  for (;;) {
    Vec v = gaussian_vec(eng, d);
    if (v.norm() > 1e-8) return ProjectivePoint(v);
  }
}

/// Greedy farthest-point selection from a deterministic candidate pool.
inline std::vector<ProjectivePoint> well_spread_points(int d, int n,
                                                       std::mt19937_64& eng) {
  const int pool_size = 50 * n + 512;
  std::vector<ProjectivePoint> pool;
  pool.reserve(pool_size);
  for (int i = 0; i < pool_size; ++i) pool.push_back(random_projective_point(eng, d));

  std::vector<ProjectivePoint> chosen;
  chosen.push_back(pool.front());
  std::vector<double> min_dist(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i)
    min_dist[i] = proj_distance(pool[i], chosen.front());
  while (static_cast<int>(chosen.size()) < n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pool.size(); ++i)
      if (min_dist[i] > min_dist[best]) best = i;
    chosen.push_back(pool[best]);
    for (std::size_t i = 0; i < pool.size(); ++i)
      min_dist[i] = std::min(min_dist[i], proj_distance(pool[i], chosen.back()));
  }
  return chosen;
}

inline bool same_rep(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace detail

/// Ordered tagged partition of projective space.
///
/// d = 2: the cells are half-open arcs tiling [0, pi); membership is an exact
/// interval test on the representative angle, with angles within 1e-12 of a
/// cell boundary snapped onto it first (so a tag sitting on a boundary lands
/// in its own cell regardless of trig roundoff).
///
/// d >= 3: the cells are hierarchical Voronoi regions.  Every cell stores the
/// chain of tags from the base level down to its own tag; membership walks the
/// chain, at each level keeping the candidates whose tag is nearest to the
/// query (ties resolved toward the lowest cell index).  Refinements are nested
/// in their parents by construction.
///
/// norm_bound dominates, for every cell, both the d_P diameter and the chord
/// diameter of the cell's set of canonical representatives; the latter is what
/// the rearrangement inequalities consume.  Exact for d = 2, estimated by
/// per-cell sampling (max observed representative distance to the tag, doubled)
/// for d >= 3.
class TaggedPartition {
public:
  TaggedPartition(std::vector<ArcCell> arcs, std::vector<ProjectivePoint> tags,
                  double norm_bound)
      : d_(2), arcs_(std::move(arcs)), tags_(std::move(tags)), norm_bound_(norm_bound) {
    validate_arcs();
  }

  TaggedPartition(int dim, std::vector<std::vector<ProjectivePoint>> paths,
                  double norm_bound)
      : d_(dim), paths_(std::move(paths)), norm_bound_(norm_bound) {
    if (d_ < 3) throw std::invalid_argument("hierarchical cells require d >= 3");
    if (paths_.empty()) throw std::invalid_argument("empty partition");
    depth_ = paths_.front().size();
    if (depth_ == 0) throw std::invalid_argument("empty cell path");
    tags_.reserve(paths_.size());
    for (const auto& path : paths_) {
      if (path.size() != depth_) throw std::invalid_argument("ragged cell paths");
      for (const auto& tag : path)
        if (tag.dim() != d_) throw std::invalid_argument("dimension mismatch");
      tags_.push_back(path.back());
    }
  }

  int dim() const { return d_; }
  std::size_t size() const { return tags_.size(); }
  const std::vector<ProjectivePoint>& tags() const { return tags_; }
  const std::vector<ArcCell>& arcs() const { return arcs_; }
  const std::vector<std::vector<ProjectivePoint>>& tag_paths() const { return paths_; }
  std::size_t depth() const { return d_ == 2 ? 1 : depth_; }
  double norm_bound() const { return norm_bound_; }

  /// Index of the unique cell containing x.
  std::size_t locate(const ProjectivePoint& x) const {
    if (x.dim() != d_) throw std::invalid_argument("dimension mismatch");
    if (d_ == 2) return locate_arc(rep_angle(x));
    return locate_voronoi(x);
  }

  bool contains(std::size_t cell, const ProjectivePoint& x) const {
    if (cell >= size()) throw std::invalid_argument("cell index out of range");
    return locate(x) == cell;
  }

private:
  void validate_arcs() {
    const double pi = std::numbers::pi;
    if (arcs_.empty() || arcs_.size() != tags_.size())
      throw std::invalid_argument("arc/tag count mismatch");
    if (arcs_.front().lo != 0.0 || std::abs(arcs_.back().hi - pi) > 1e-12)
      throw std::invalid_argument("arcs must tile [0, pi)");
    arcs_.back().hi = pi;
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      if (!(arcs_[i].hi > arcs_[i].lo)) throw std::invalid_argument("empty arc cell");
      if (i + 1 < arcs_.size() && arcs_[i].hi != arcs_[i + 1].lo)
        throw std::invalid_argument("arcs must tile [0, pi) without gaps");
      if (tags_[i].dim() != 2) throw std::invalid_argument("dimension mismatch");
    }
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      if (locate_arc(rep_angle(tags_[i])) != i)
        throw std::invalid_argument("tag outside its cell");
    }
  }

  std::size_t locate_arc(double theta) const {
    // Snap onto a boundary when within coordinate tolerance, then half-open test.
    for (const ArcCell& a : arcs_) {
      if (std::abs(theta - a.lo) <= 1e-12) {
        theta = a.lo;
        break;
      }
    }
    if (theta < 0.0 || theta >= std::numbers::pi)
      throw std::runtime_error("atom outside partition range");
    std::size_t lo = 0, hi = arcs_.size();
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (arcs_[mid].lo <= theta)
        lo = mid;
      else
        hi = mid;
    }
    if (theta < arcs_[lo].lo || theta >= arcs_[lo].hi)
      throw std::runtime_error("atom belongs to no cell");
    return lo;
  }

  std::size_t locate_voronoi(const ProjectivePoint& x) const {
    std::vector<std::size_t> cand(size());
    std::iota(cand.begin(), cand.end(), std::size_t{0});
    for (std::size_t level = 0; level < depth_ && cand.size() > 1; ++level) {
      double best = std::numeric_limits<double>::infinity();
      const Vec* best_tag = nullptr;
      for (std::size_t idx : cand) {
        const ProjectivePoint& tag = paths_[idx][level];
        const double dist = proj_distance(x, tag);
        if (dist < best) {
          best = dist;
          best_tag = &tag.rep();
        }
      }
      std::vector<std::size_t> kept;
      for (std::size_t idx : cand)
        if (detail::same_rep(paths_[idx][level].rep(), *best_tag)) kept.push_back(idx);
      cand.swap(kept);
    }
    return cand.front();
  }

  // Sampled norm bound for d >= 3: per cell, at least `per_cell` accepted
  // points; bound = 2 * max observed representative distance to the tag.
  void estimate_norm_bound_sampled(std::uint64_t seed, int per_cell) {
    std::mt19937_64 eng(seed);
    const std::size_t n = size();
    std::vector<double> radius(n, 0.0);
    std::vector<long> count(n, 0);
    const long global = static_cast<long>(n) * per_cell;
    for (long i = 0; i < global; ++i) {
      const ProjectivePoint x = detail::random_projective_point(eng, d_);
      const std::size_t c = locate(x);
      ++count[c];
      radius[c] = std::max(radius[c], (x.rep() - tags_[c].rep()).norm());
    }
    for (std::size_t c = 0; c < n; ++c) {
      double sigma = std::max(radius[c], 0.05);
      long attempts = 0;
      const long attempt_cap = 400L * per_cell;
      int sigma_phase = 0;
      while (count[c] < per_cell && attempts < attempt_cap) {
        int accepted = 0;
        for (int k = 0; k < 64 && count[c] < per_cell; ++k, ++attempts) {
          Vec v = tags_[c].rep() + sigma * detail::gaussian_vec(eng, d_);
          if (v.norm() <= 1e-12) continue;
          const ProjectivePoint x(v);
          if (locate(x) != c) continue;
          ++count[c];
          ++accepted;
          radius[c] = std::max(radius[c], (x.rep() - tags_[c].rep()).norm());
        }
        if (accepted == 0) {
          sigma *= 0.5;
          if (sigma < 1e-7) sigma = (++sigma_phase % 2) ? 0.05 : 1.0;  // rescan scales
        }
      }
    }
    norm_bound_ = 0.0;
    for (std::size_t c = 0; c < n; ++c) norm_bound_ = std::max(norm_bound_, 2.0 * radius[c]);
  }

  /// Accepted sample points inside one cell (cap proposals around the tag with
  /// an adaptive scale).  Used when refining.
  std::vector<ProjectivePoint> sample_in_cell(std::size_t cell, int want,
                                              std::mt19937_64& eng) const {
    std::vector<ProjectivePoint> out;
    out.reserve(want);
    double sigma = 1.0;
    long attempts = 0;
    const long attempt_cap = 4000L * want;
    while (static_cast<int>(out.size()) < want && attempts < attempt_cap) {
      int accepted = 0;
      for (int k = 0; k < 64 && static_cast<int>(out.size()) < want; ++k, ++attempts) {
        Vec v = tags_[cell].rep() + sigma * detail::gaussian_vec(eng, d_);
        if (v.norm() <= 1e-12) continue;
        ProjectivePoint x(v);
        if (locate(x) == cell) {
          out.push_back(std::move(x));
          ++accepted;
        }
      }
      if (accepted == 0) sigma = (sigma > 2e-7) ? sigma * 0.5 : 1.0;
    }
    return out;
  }

  friend TaggedPartition uniform_partition(int d, int n);
  friend TaggedPartition refine(const TaggedPartition& p, int factor);

  int d_ = 0;
  std::vector<ArcCell> arcs_;                         // d = 2
  std::vector<std::vector<ProjectivePoint>> paths_;   // d >= 3
  std::vector<ProjectivePoint> tags_;
  std::size_t depth_ = 0;
  double norm_bound_ = 0.0;
};

/// Uniform partition: n equal arcs with midpoint tags for d = 2; Voronoi cells
/// of n well-spread canonical points for d >= 3.
inline TaggedPartition uniform_partition(int d, int n) {
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  if (n < 1) throw std::invalid_argument("cell count must be >= 1");
  const double pi = std::numbers::pi;
  if (d == 2) {
    std::vector<double> bounds(n + 1);
    for (int k = 0; k <= n; ++k) bounds[k] = (k * pi) / n;
    bounds[0] = 0.0;
    bounds[n] = pi;
    std::vector<ArcCell> arcs(n);
    std::vector<ProjectivePoint> tags;
    tags.reserve(n);
    for (int k = 0; k < n; ++k) {
      arcs[k] = {bounds[k], bounds[k + 1]};
      tags.push_back(point_at_angle(0.5 * (bounds[k] + bounds[k + 1])));
    }
    return TaggedPartition(std::move(arcs), std::move(tags), 2.0 * std::sin(pi / (2.0 * n)));
  }
  std::mt19937_64 eng(detail::mix_seed(0x706172740001ull,
                                       (static_cast<std::uint64_t>(d) << 32) ^ n));
  auto tags = detail::well_spread_points(d, n, eng);
  std::vector<std::vector<ProjectivePoint>> paths;
  paths.reserve(n);
  for (auto& t : tags) paths.push_back({t});
  TaggedPartition p(d, std::move(paths), 0.0);
  p.estimate_norm_bound_sampled(detail::mix_seed(0x6e6f726d0001ull, n ^ (d << 8)), 10000);
  return p;
}

/// Ordered refinement: every cell splits into `factor` subcells in place, the
/// parent tag is retained by the subcell containing it, and new subcells get
/// fresh tags (arc midpoints for d = 2; well-spread in-cell samples for d >= 3).
inline TaggedPartition refine(const TaggedPartition& p, int factor) {
  if (factor < 2) throw std::invalid_argument("refinement factor must be >= 2");
  if (p.dim() == 2) {
    std::vector<ArcCell> arcs;
    std::vector<ProjectivePoint> tags;
    arcs.reserve(p.size() * factor);
    double norm_bound = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const ArcCell& parent = p.arcs()[i];
      const double theta_p = rep_angle(p.tags()[i]);
      std::vector<double> bounds(factor + 1);
      for (int j = 0; j <= factor; ++j)
        bounds[j] = parent.lo + (j * parent.width()) / factor;
      bounds[0] = parent.lo;
      bounds[factor] = parent.hi;
      int m = std::clamp(static_cast<int>((theta_p - parent.lo) / parent.width() * factor),
                         0, factor - 1);
      while (m > 0 && theta_p < bounds[m]) --m;
      while (m + 1 < factor && theta_p >= bounds[m + 1]) ++m;
      for (int j = 0; j < factor; ++j) {
        arcs.push_back({bounds[j], bounds[j + 1]});
        const double w = bounds[j + 1] - bounds[j];
        norm_bound = std::max(norm_bound, 2.0 * std::sin(0.5 * w));
        tags.push_back(j == m ? p.tags()[i]
                              : point_at_angle(0.5 * (bounds[j] + bounds[j + 1])));
      }
    }
    return TaggedPartition(std::move(arcs), std::move(tags), norm_bound);
  }

  std::mt19937_64 eng(detail::mix_seed(
      0x726566696e65ull, (static_cast<std::uint64_t>(p.size()) << 24) ^
                             (static_cast<std::uint64_t>(p.depth()) << 8) ^
                             static_cast<std::uint64_t>(factor) ^
                             (static_cast<std::uint64_t>(p.dim()) << 48)));
  std::vector<std::vector<ProjectivePoint>> paths;
  paths.reserve(p.size() * factor);
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<ProjectivePoint> child_tags;
    child_tags.push_back(p.tags()[i]);
    auto candidates = p.sample_in_cell(i, 192 * factor, eng);
    while (static_cast<int>(child_tags.size()) < factor) {
      // farthest from the tags chosen so far; fall back to tiny perturbations
      // of the parent tag when the cell is too small to sample
      double best = -1.0;
      std::size_t best_idx = candidates.size();
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        double dist = std::numeric_limits<double>::infinity();
        for (const auto& t : child_tags)
          dist = std::min(dist, proj_distance(candidates[c], t));
        if (dist > best) {
          best = dist;
          best_idx = c;
        }
      }
      if (best_idx < candidates.size() && best > 1e-14) {
        child_tags.push_back(candidates[best_idx]);
      } else {
        for (;;) {
          Vec v = p.tags()[i].rep() + 1e-8 * detail::gaussian_vec(eng, p.dim());
          ProjectivePoint x(v);
          if (p.locate(x) != i) continue;
          bool fresh = true;
          for (const auto& t : child_tags)
            if (proj_distance(x, t) == 0.0) fresh = false;
          if (fresh) {
            child_tags.push_back(std::move(x));
            break;
          }
        }
      }
    }
    for (int j = 0; j < factor; ++j) {
      std::vector<ProjectivePoint> path = p.tag_paths()[i];
      path.push_back(child_tags[j]);
      paths.push_back(std::move(path));
    }
  }
  TaggedPartition out(p.dim(), std::move(paths), 0.0);
  out.estimate_norm_bound_sampled(
      detail::mix_seed(0x6e6f726d0002ull, (p.size() << 16) ^ factor), 10000);
  return out;
}

}  // namespace projlen
