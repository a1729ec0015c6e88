#pragma once

#include "projlen/measure.hpp"
#include "projlen/nnls.hpp"
#include "projlen/parallel.hpp"
#include "projlen/partition.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace projlen {

/// Directions on the sphere paired with measured projected lengths.
struct TransformSamples {
  int d = 0;
  std::vector<Vec> directions;
  std::vector<double> values;
};

namespace detail {

inline Vec checked_direction(const Vec& xi) {
  const double n = xi.norm();
  if (std::abs(n - 1.0) <= 1e-12) return xi;
  if (std::abs(n - 1.0) <= 1e-6) {
    std::cerr << "projlen: normalizing direction with |xi| = " << n << "\n";
    return xi / n;
  }
  throw std::invalid_argument("direction is not a unit vector");
}

template <class G>
double simpson(G&& g, double lo, double hi, int n /* even, >= 2 */) {
  if (hi <= lo) return 0.0;
  const double h = (hi - lo) / n;
  double s = g(lo) + g(hi);
  for (int k = 1; k < n; ++k) s += g(lo + k * h) * ((k % 2) ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace detail

/// Transform of a discrete measure at one direction: sum of w_i |xi . x_i|.
/// Even in xi and blind to the representative sign.
inline double forward_discrete(const DiscreteMeasure& mu, const Vec& xi_in) {
  if (xi_in.size() != mu.dim()) throw std::invalid_argument("dimension mismatch");
  const Vec xi = detail::checked_direction(xi_in);
  double s = 0.0;
  for (const Atom& a : mu.atoms()) s += a.weight * std::abs(xi.dot(a.point.rep()));
  return s;
}

/// Projected length of a curve: exact finite sum of (t_i - t_{i-1}) |xi . v_i|.
inline double forward_curve(const PcvCurve& c, const Vec& xi_in) {
  if (xi_in.size() != c.dim()) throw std::invalid_argument("dimension mismatch");
  const Vec xi = detail::checked_direction(xi_in);
  double s = 0.0;
  for (std::size_t i = 0; i < c.pieces(); ++i)
    s += (c.breakpoints()[i + 1] - c.breakpoints()[i]) *
         std::abs(xi.dot(c.velocities()[i]));
  return s;
}

/// Transform of a density on the projective line (d = 2): composite Simpson on
/// the two panels split at the kernel kink (the angle orthogonal to xi), so
/// the integrand is smooth inside each panel.
template <class F>
double forward_density(F&& density, const Vec& xi_in, int n_quad) {
  if (xi_in.size() != 2)
    throw std::invalid_argument("forward_density supports d = 2 only");
  if (n_quad < 16) throw std::invalid_argument("n_quad must be >= 16");
  const Vec xi = detail::checked_direction(xi_in);
  const double pi = std::numbers::pi;
  const double a = std::atan2(xi[1], xi[0]);
  double kink = std::fmod(a + 0.5 * pi, pi);
  if (kink < 0.0) kink += pi;
  auto g = [&](double th) { return std::abs(std::cos(th - a)) * density(th); };
  auto panel_n = [&](double len) {
    int n = static_cast<int>(std::ceil(n_quad * len / pi));
    n = std::max(n, 8);
    return n + (n % 2);
  };
  double s = 0.0;
  if (kink > 1e-15) s += detail::simpson(g, 0.0, kink, panel_n(kink));
  if (pi - kink > 1e-15) s += detail::simpson(g, kink, pi, panel_n(pi - kink));
  return s;
}

/// Measured transform data on m directions: the half-circle grid k pi / m for
/// d = 2 (evenness makes the half-circle sufficient), well-spread canonical
/// directions for d >= 3.
inline TransformSamples sample_transform(const DiscreteMeasure& mu, int m) {
  if (m < 2) throw std::invalid_argument("need at least 2 sample directions");
  TransformSamples out;
  out.d = mu.dim();
  if (mu.dim() == 2) {
    out.directions.reserve(m);
    for (int k = 0; k < m; ++k) {
      const double th = (k * std::numbers::pi) / m;
      Vec xi(2);
      xi << std::cos(th), std::sin(th);
      out.directions.push_back(xi);
    }
  } else {
    std::mt19937_64 eng(detail::mix_seed(0x73616d70ull, (mu.dim() << 20) ^ m));
    for (const auto& p : detail::well_spread_points(mu.dim(), m, eng))
      out.directions.push_back(p.rep());
  }
  out.values.assign(m, 0.0);
  parallel_for(out.directions.size(),
               [&](std::size_t i) { out.values[i] = forward_discrete(mu, out.directions[i]); });
  return out;
}

struct InversionResult {
  DiscreteMeasure measure;
  double residual_rms = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  int kernel_rank = 0;
  bool rank_deficient = false;
  bool converged = false;
};

/// Nonnegative least-squares inversion of sampled transform data on the tags
/// of a partition: min over w >= 0 of sum_m (sum_i w_i |xi_m . tag_i| - M_m)^2.
/// The sampled kernel must have full column rank for unique recovery; the rank
/// is checked and reported.
inline InversionResult invert_nnls(const TransformSamples& samples,
                                   const TaggedPartition& p, double tol = 1e-10) {
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  if (samples.directions.empty()) throw std::invalid_argument("empty samples");
  if (samples.d != p.dim()) throw std::invalid_argument("dimension mismatch");
  if (samples.directions.size() != samples.values.size())
    throw std::invalid_argument("sample direction/value count mismatch");
  const int m = static_cast<int>(samples.directions.size());
  const int n = static_cast<int>(p.size());
  if (m < n)
    std::cerr << "projlen: " << m << " samples for " << n
              << " tags; inversion may be underdetermined\n";

  Eigen::MatrixXd A(m, n);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    const Vec xi = detail::checked_direction(samples.directions[i]);
    for (int j = 0; j < n; ++j) A(i, j) = std::abs(xi.dot(p.tags()[j].rep()));
    rhs[i] = samples.values[i];
  }

  InversionResult out{DiscreteMeasure(p.dim())};
  out.kernel_rank = static_cast<int>(A.colPivHouseholderQr().rank());
  out.rank_deficient = out.kernel_rank < n;
  if (out.rank_deficient)
    std::cerr << "projlen: sampled kernel rank " << out.kernel_rank << " < " << n
              << " tags; recovery is not unique\n";

  const NnlsResult fit = nnls(A, rhs, tol);
  out.kkt_residual = fit.kkt_residual;
  out.iterations = fit.iterations;
  out.converged = fit.converged;
  std::vector<Atom> atoms;
  for (int j = 0; j < n; ++j)
    if (fit.x[j] > 0.0) atoms.push_back({p.tags()[j], fit.x[j]});
  out.measure = DiscreteMeasure(p.dim(), std::move(atoms));
  out.residual_rms = (A * fit.x - rhs).norm() / std::sqrt(static_cast<double>(m));
  return out;
}

/// Multiplier of the transform on the frequency-2k circular harmonics:
/// lambda_k = integral over [0, 2 pi) of |cos u| cos(2 k u) du.
inline double cosine_multiplier(int k) {
  if (k < 0) throw std::invalid_argument("harmonic index must be >= 0");
  if (k == 0) return 4.0;
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  return 4.0 * sign / (4.0 * static_cast<double>(k) * k - 1.0);
}

/// Even density on [0, pi) reconstructed from its harmonics.
struct FourierDensity {
  double a0 = 0.0;
  std::vector<double> cos_coeff;  // frequency 2k, k = 1..K
  std::vector<double> sin_coeff;

  double operator()(double theta) const {
    double s = a0;
    for (std::size_t k = 0; k < cos_coeff.size(); ++k) {
      const double arg = 2.0 * static_cast<double>(k + 1) * theta;
      s += cos_coeff[k] * std::cos(arg) + sin_coeff[k] * std::sin(arg);
    }
    return s;
  }
};

/// Fourier-multiplier inversion for d = 2 densities: expand the sampled
/// transform in {cos 2k theta, sin 2k theta}, divide by the multipliers
/// lambda_k (never zero, which is the injectivity of the transform), and
/// return the density.  Requires at least 4 uniform samples per harmonic.
inline FourierDensity invert_fourier_d2(const std::vector<double>& grid_values,
                                        int n_harmonics) {
  if (n_harmonics < 1) throw std::invalid_argument("need at least one harmonic");
  const int big_n = static_cast<int>(grid_values.size());
  if (big_n < 4 * n_harmonics)
    throw std::invalid_argument("insufficient samples for requested harmonics");
  const double pi = std::numbers::pi;
  FourierDensity out;
  double mean = 0.0;
  for (double v : grid_values) mean += v;
  mean /= big_n;
  out.a0 = 2.0 * mean / cosine_multiplier(0);
  out.cos_coeff.resize(n_harmonics);
  out.sin_coeff.resize(n_harmonics);
  for (int k = 1; k <= n_harmonics; ++k) {
    double ck = 0.0, sk = 0.0;
    for (int j = 0; j < big_n; ++j) {
      const double arg = 2.0 * k * (j * pi / big_n);
      ck += grid_values[j] * std::cos(arg);
      sk += grid_values[j] * std::sin(arg);
    }
    ck *= 2.0 / big_n;
    sk *= 2.0 / big_n;
    out.cos_coeff[k - 1] = 2.0 * ck / cosine_multiplier(k);
    out.sin_coeff[k - 1] = 2.0 * sk / cosine_multiplier(k);
  }
  return out;
}

}  // namespace projlen
