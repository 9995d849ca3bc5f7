// Small dense linear programs solved by a primal active-set method.  The
// inner lattice solver calls this with twelve unknowns and a few hundred rows.
#pragma once

#include <Eigen/Dense>

#include <vector>

namespace tetrapack::optimizer {

// minimize cost . x  subject to  ineq x >= ineq_rhs,  eq x = eq_rhs,
// lower <= x <= upper.
struct LinearProgram {
  Eigen::VectorXd cost;
  Eigen::MatrixXd ineq;
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq;
  Eigen::VectorXd eq_rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

enum class LpStatus { optimal, infeasible_start, iteration_limit, unbounded };

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  Eigen::VectorXd x;
  // Inequality rows (indices into `ineq`) in the final working set, with
  // their multipliers; bound rows are not reported.
  std::vector<int> active;
  std::vector<double> multipliers;
  int iterations = 0;
};

// `start` must satisfy every constraint (within `feas_tol`).
LpResult solve_lp(const LinearProgram& lp, const Eigen::VectorXd& start, double feas_tol = 1e-9);

}  // namespace tetrapack::optimizer
