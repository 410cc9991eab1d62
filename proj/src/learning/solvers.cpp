#include "physmocap/learning/solvers.hpp"

#include <Eigen/Dense>
#include <limits>
#include <algorithm>
#include <vector>

namespace physmocap::learning {

VecX nnls(const MatX& a, const VecX& b, double ridge) {
  const int n = static_cast<int>(a.cols());
  VecX x = VecX::Zero(n);
  std::vector<char> passive(n, 0);
  VecX w = a.transpose() * (b - a * x);  // negative gradient

  const double tol = 1e-12 * std::max(1.0, b.norm());
  for (int outer = 0; outer < 3 * n + 10; ++outer) {
    // Most promising zero variable.
    int best = -1;
    double best_w = tol;
    for (int j = 0; j < n; ++j)
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    if (best < 0) break;
    passive[best] = 1;

    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      std::vector<int> p;
      for (int j = 0; j < n; ++j)
        if (passive[j]) p.push_back(j);
      MatX ap(a.rows(), p.size());
      for (std::size_t c = 0; c < p.size(); ++c) ap.col(c) = a.col(p[c]);
      MatX normal = ap.transpose() * ap;
      normal.diagonal().array() += ridge + 1e-14;
      VecX z = normal.ldlt().solve(ap.transpose() * b);

      bool feasible = true;
      double alpha = 1.0;
      int blocker = -1;
      for (std::size_t c = 0; c < p.size(); ++c) {
        if (z[c] <= 0) {
          feasible = false;
          const double step = x[p[c]] / (x[p[c]] - z[c]);
          if (step < alpha) {
            alpha = step;
            blocker = p[c];
          }
        }
      }
      if (feasible) {
        x.setZero();
        for (std::size_t c = 0; c < p.size(); ++c) x[p[c]] = z[c];
        break;
      }
      for (std::size_t c = 0; c < p.size(); ++c)
        x[p[c]] += alpha * (z[c] - x[p[c]]);
      if (blocker >= 0) {
        x[blocker] = 0;
        passive[blocker] = 0;
      }
    }
    w = a.transpose() * (b - a * x) - ridge * x;
  }
  return x;
}

namespace {

double simplex_objective(const MatX& a, const VecX& b, double ridge,
                         const VecX& x) {
  return (a * x - b).squaredNorm() + ridge * x.squaredNorm();
}

}  // namespace

VecX simplex_ls(const MatX& a, const VecX& b, double ridge, const VecX& init) {
  const int n = static_cast<int>(a.cols());
  VecX x = init;
  VecX best_x = init;
  double best_obj = simplex_objective(a, b, ridge, init);

  std::vector<char> passive(n, 0);
  for (int j = 0; j < n; ++j) passive[j] = init[j] > 1e-12 ? 1 : 0;
  // Need at least one free variable to satisfy the sum constraint.
  if (std::count(passive.begin(), passive.end(), char(1)) == 0) passive[0] = 1;

  for (int outer = 0; outer < 4 * n + 12; ++outer) {
    // Equality-constrained LS on the passive set via the KKT system.
    std::vector<int> p;
    for (int j = 0; j < n; ++j)
      if (passive[j]) p.push_back(j);
    const int m = static_cast<int>(p.size());
    MatX ap(a.rows(), m);
    for (int c = 0; c < m; ++c) ap.col(c) = a.col(p[c]);
    MatX kkt = MatX::Zero(m + 1, m + 1);
    kkt.topLeftCorner(m, m) = ap.transpose() * ap;
    kkt.topLeftCorner(m, m).diagonal().array() += ridge + 1e-13;
    kkt.topRightCorner(m, 1).setOnes();
    kkt.bottomLeftCorner(1, m).setOnes();
    VecX rhs(m + 1);
    rhs.head(m) = ap.transpose() * b;
    rhs[m] = 1.0;
    const VecX sol = kkt.fullPivLu().solve(rhs);
    VecX z = VecX::Zero(n);
    for (int c = 0; c < m; ++c) z[p[c]] = sol[c];
    const double mu = sol[m];  // multiplier of the sum constraint

    bool all_nonneg = true;
    for (int c = 0; c < m; ++c)
      if (z[p[c]] < -1e-12) all_nonneg = false;

    if (all_nonneg) {
      z = z.cwiseMax(0.0);
      const double s = z.sum();
      if (s > 1e-12) z /= s;  // wash out the clamping residue
      const double obj = simplex_objective(a, b, ridge, z);
      if (obj < best_obj) {
        best_obj = obj;
        best_x = z;
      }
      x = z;
      // Dual feasibility of the zeroed variables.
      const VecX grad = a.transpose() * (a * x - b) + ridge * x;
      int worst = -1;
      double worst_v = -1e-10 * std::max(1.0, b.norm());
      for (int j = 0; j < n; ++j) {
        if (passive[j]) continue;
        const double nu = grad[j] - mu;
        if (nu < worst_v) {
          worst_v = nu;
          worst = j;
        }
      }
      if (worst < 0) break;  // KKT point
      passive[worst] = 1;
      continue;
    }

    // Step from x toward z until the first passive variable hits zero.
    double alpha = 1.0;
    int blocker = -1;
    for (int c = 0; c < m; ++c) {
      const int j = p[c];
      if (z[j] < x[j]) {
        const double denom = x[j] - z[j];
        if (denom > 1e-300) {
          const double step = x[j] / denom;
          if (z[j] < -1e-12 && step < alpha) {
            alpha = step;
            blocker = j;
          }
        }
      }
    }
    x += alpha * (z - x);
    if (blocker >= 0) {
      x[blocker] = 0;
      passive[blocker] = 0;
      if (std::count(passive.begin(), passive.end(), char(1)) == 0) {
        passive[blocker] = 1;  // cannot empty the passive set
        break;
      }
    }
  }
  return best_x;
}

}  // namespace physmocap::learning
