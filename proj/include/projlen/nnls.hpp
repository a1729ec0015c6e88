#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace projlen {

struct NnlsResult {
  Eigen::VectorXd x;
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nonnegative least squares min |A x - b| over x >= 0 by the active-set
/// method of Lawson and Hanson.  With gradient g = A^T (A x - b), termination
/// requires max(|g_i| over x_i > 0, max(0, -g_i) over x_i = 0) <= tol.
inline NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                       double tol = 1e-10, int max_outer = -1) {
  if (A.rows() != b.size()) throw std::invalid_argument("nnls size mismatch");
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  const int n = static_cast<int>(A.cols());
  if (max_outer < 0) max_outer = 30 * n + 100;

  NnlsResult res;
  res.x = Eigen::VectorXd::Zero(n);
  std::vector<char> passive(n, 0);

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (passive[i]) idx.push_back(i);
    z = Eigen::VectorXd::Zero(n);
    if (idx.empty()) return;
    Eigen::MatrixXd Ap(A.rows(), static_cast<int>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(k) = A.col(idx[k]);
    const Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
    for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[k];
  };

  auto kkt = [&](const Eigen::VectorXd& g) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      worst = std::max(worst, passive[i] ? std::abs(g[i]) : std::max(0.0, g[i]));
    return worst;
  };

  for (int outer = 0; outer < max_outer; ++outer) {
    ++res.iterations;
    const Eigen::VectorXd g = A.transpose() * (b - A * res.x);
    res.kkt_residual = kkt(g);
    if (res.kkt_residual <= tol) {
      res.converged = true;
      return res;
    }
    int enter = -1;
    double best = tol;
    for (int i = 0; i < n; ++i) {
      if (passive[i]) continue;
      if (g[i] > best) {
        best = g[i];
        enter = i;
      }
    }
    if (enter < 0) break;  // residual sits in the passive set; numerical floor
    passive[enter] = 1;

    Eigen::VectorXd z;
    for (int guard = 0; guard <= n + 1; ++guard) {
      solve_passive(z);
      double alpha = 1.0;
      bool interior = true;
      for (int i = 0; i < n; ++i) {
        if (!passive[i] || z[i] > 0.0) continue;
        interior = false;
        const double denom = res.x[i] - z[i];
        if (denom > 0.0) alpha = std::min(alpha, res.x[i] / denom);
      }
      if (interior) {
        res.x = z;
        break;
      }
      res.x += alpha * (z - res.x);
      for (int i = 0; i < n; ++i) {
        if (passive[i] && res.x[i] <= 1e-14) {
          res.x[i] = 0.0;
          passive[i] = 0;
        }
      }
    }
  }
  const Eigen::VectorXd g = A.transpose() * (b - A * res.x);
  res.kkt_residual = kkt(g);
  res.converged = res.kkt_residual <= tol;
  return res;
}

}  // namespace projlen
