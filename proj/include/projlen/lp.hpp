#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace projlen::lp {

struct Result {
  bool optimal = false;
  double value = 0.0;
  Eigen::VectorXd x;  // maximizer
  int iterations = 0;
};

/// Dense linear program
///     maximize c.x   subject to   row_r . x <= rhs_r  for every row,
/// with x free.  Solved to a vertex through the dual
///     minimize rhs.y   subject to   A^T y = c,  y >= 0
/// with a two-phase revised simplex; the returned x is the vector of simplex
/// multipliers at optimality, which solves the primal.
///
/// Geometry in this project: few variables (support points plus two scalars),
/// many sparse rows (pairwise Lipschitz constraints), so the dual basis stays
/// small while pricing scans the rows.
class InequalityLp {
public:
  explicit InequalityLp(int nvars) : n_(nvars) {
    if (nvars < 1) throw std::invalid_argument("lp needs at least one variable");
  }

  void add_row(std::vector<std::pair<int, double>> entries, double rhs) {
    for (const auto& [idx, val] : entries) {
      (void)val;
      if (idx < 0 || idx >= n_) throw std::invalid_argument("lp row index out of range");
    }
    rows_.push_back(std::move(entries));
    rhs_.push_back(rhs);
  }

  int rows() const { return static_cast<int>(rows_.size()); }

  Result maximize(const Eigen::VectorXd& c) const {
    if (c.size() != n_) throw std::invalid_argument("objective size mismatch");
    const int n = n_;
    const int m = static_cast<int>(rows_.size());
    const int total = m + n;

    constexpr double kRcTol = 1e-9;
    constexpr double kPivTol = 1e-10;
    const int bland_after = 2000;
    const int max_iter = 50000 + 5 * m;

    std::vector<double> art_sign(n);
    std::vector<int> basic(n);
    std::vector<char> is_basic(total, 0);
    std::vector<char> alive(total, 1);
    Eigen::VectorXd xb(n);
    for (int i = 0; i < n; ++i) {
      art_sign[i] = (c[i] >= 0.0) ? 1.0 : -1.0;
      basic[i] = m + i;
      is_basic[m + i] = 1;
      xb[i] = std::abs(c[i]);
    }

    auto col_dot = [&](int j, const Eigen::VectorXd& w) -> double {
      if (j < m) {
        double s = 0.0;
        for (const auto& [idx, val] : rows_[j]) s += w[idx] * val;
        return s;
      }
      return w[j - m] * art_sign[j - m];
    };
    auto col_dense = [&](int j, Eigen::VectorXd& out) {
      out.setZero();
      if (j < m) {
        for (const auto& [idx, val] : rows_[j]) out[idx] += val;
      } else {
        out[j - m] = art_sign[j - m];
      }
    };
    auto cost = [&](int j, int phase) -> double {
      if (phase == 1) return (j >= m) ? 1.0 : 0.0;
      return (j < m) ? rhs_[j] : 0.0;
    };

    Eigen::MatrixXd B(n, n);
    Eigen::VectorXd tmp(n), pi(n), dir(n), cost_b(n);
    Result res;
    int phase = 1;

    for (int iter = 0; iter < max_iter; ++iter) {
      for (int i = 0; i < n; ++i) {
        col_dense(basic[i], tmp);
        B.col(i) = tmp;
      }
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
      for (int i = 0; i < n; ++i) cost_b[i] = cost(basic[i], phase);
      pi = lu.transpose().solve(cost_b);

      const bool bland = iter > bland_after;
      int enter = -1;
      double best = -kRcTol;
      for (int j = 0; j < total; ++j) {
        if (is_basic[j] || !alive[j]) continue;
        if (phase == 2 && j >= m) continue;
        const double r = cost(j, phase) - col_dot(j, pi);
        if (r < best) {
          best = r;
          enter = j;
          if (bland) break;
        }
      }

      if (enter < 0) {
        if (phase == 1) {
          double infeas = 0.0;
          for (int i = 0; i < n; ++i)
            if (basic[i] >= m) infeas += std::max(xb[i], 0.0);
          if (infeas > 1e-7) return res;  // dual infeasible: primal unbounded
          // Drive basic artificials out on degenerate pivots where possible.
          for (int i = 0; i < n; ++i) {
            if (basic[i] < m) continue;
            Eigen::VectorXd unit = Eigen::VectorXd::Zero(n);
            unit[i] = 1.0;
            const Eigen::VectorXd w = lu.transpose().solve(unit);
            int pick = -1;
            double pick_mag = 1e-7;
            for (int j = 0; j < m; ++j) {
              if (is_basic[j]) continue;
              const double mag = std::abs(col_dot(j, w));
              if (mag > pick_mag) {
                pick_mag = mag;
                pick = j;
              }
            }
            if (pick >= 0) {
              is_basic[basic[i]] = 0;
              alive[basic[i]] = 0;
              basic[i] = pick;
              is_basic[pick] = 1;
              col_dense(pick, tmp);
              B.col(i) = tmp;
              lu.compute(B);
            }
          }
          phase = 2;
          continue;
        }
        res.optimal = true;
        res.x = pi;
        res.value = c.dot(pi);
        res.iterations = iter;
        return res;
      }

      col_dense(enter, tmp);
      dir = lu.solve(tmp);

      int leave = -1;
      double theta = std::numeric_limits<double>::infinity();
      if (phase == 2) {
        // A basic artificial pinned at zero must not move; kick it out first.
        for (int i = 0; i < n; ++i) {
          if (basic[i] >= m && std::abs(dir[i]) > kPivTol) {
            leave = i;
            theta = 0.0;
            break;
          }
        }
      }
      if (leave < 0) {
        for (int i = 0; i < n; ++i) {
          if (dir[i] <= kPivTol) continue;
          const double t = std::max(xb[i], 0.0) / dir[i];
          if (t < theta - 1e-12 ||
              (t < theta + 1e-12 && (leave < 0 || basic[i] < basic[leave]))) {
            theta = t;
            leave = i;
          }
        }
      }
      if (leave < 0) return res;  // dual unbounded: primal infeasible

      xb -= theta * dir;
      xb[leave] = theta;
      for (int i = 0; i < n; ++i)
        if (xb[i] < 0.0) xb[i] = 0.0;
      is_basic[basic[leave]] = 0;
      if (basic[leave] >= m) alive[basic[leave]] = 0;
      basic[leave] = enter;
      is_basic[enter] = 1;
    }
    return res;  // iteration cap reached
  }

private:
  int n_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  std::vector<double> rhs_;
};

}  // namespace projlen::lp
