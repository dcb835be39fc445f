#pragma once

#include <Eigen/Dense>

namespace systolic {

enum class LpStatus { optimal, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  double value = 0.0;
  Eigen::VectorXd x;
  /// Multipliers y >= 0 with A^T y = c at the optimum.
  Eigen::VectorXd dual;
};

// Dense tableau simplex for  max c.x  s.t.  A x <= b  with free x and
// b >= 0, so the origin is a feasible start. Bland's rule; meant for the
// small master problems that show up here (a few variables, up to a few
// thousand rows).
LpSolution maximize_free(const Eigen::VectorXd& c, const Eigen::MatrixXd& a,
                         const Eigen::VectorXd& b);

}  // namespace systolic
