#include "systolic/simplex_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "systolic/error.hpp"

namespace systolic {

LpSolution maximize_free(const Eigen::VectorXd& c, const Eigen::MatrixXd& a,
                         const Eigen::VectorXd& b) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (c.size() != n || b.size() != m) throw InvalidInput("LP dimension mismatch");
  if (m > 0 && b.minCoeff() < 0.0) throw InvalidInput("LP needs b >= 0");

  // Columns: x+ (n), x- (n), slacks (m), rhs.
  const int cols = 2 * n + m;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, cols + 1);
  t.topLeftCorner(m, n) = a;
  t.block(0, n, m, n) = -a;
  t.block(0, 2 * n, m, m).setIdentity();
  t.block(0, cols, m, 1) = b;
  t.block(m, 0, 1, n) = -c.transpose();
  t.block(m, n, 1, n) = c.transpose();

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = 2 * n + i;

  const double scale = std::max({1.0, c.cwiseAbs().maxCoeff(),
                                 m > 0 ? a.cwiseAbs().maxCoeff() : 1.0});
  const double eps = 1e-11 * scale;

  LpSolution sol;
  for (int iter = 0;; ++iter) {
    if (iter > 50 * (cols + m) + 1000) throw ConvergenceError("simplex iteration cap", 0.0);
    int enter = -1;
    for (int j = 0; j < cols; ++j) {
      if (t(m, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double piv = t(i, enter);
      if (piv <= eps) continue;
      const double ratio = t(i, cols) / piv;
      const bool tie = leave >= 0 && std::abs(ratio - best) <= 1e-14 * (1.0 + best);
      if ((!tie && ratio < best) || (tie && basis[i] < basis[leave])) {
        best = std::min(best, ratio);
        leave = i;
      }
    }
    if (leave < 0) {
      sol.status = LpStatus::unbounded;
      sol.value = std::numeric_limits<double>::infinity();
      return sol;
    }
    t.row(leave) /= t(leave, enter);
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = t(i, enter);
      if (f != 0.0) t.row(i) -= f * t.row(leave);
    }
    basis[leave] = enter;
  }

  Eigen::VectorXd split = Eigen::VectorXd::Zero(cols);
  for (int i = 0; i < m; ++i) split[basis[i]] = t(i, cols);
  sol.x = split.head(n) - split.segment(n, n);
  sol.value = t(m, cols);
  sol.dual = t.block(m, 2 * n, 1, m).transpose().cwiseMax(0.0);
  return sol;
}

}  // namespace systolic
