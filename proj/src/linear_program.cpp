#include "tetrapack/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tetrapack::optimizer {

namespace {

// Every constraint as a row r with r . x >= rhs; equalities come first.
struct RowSet {
  Eigen::MatrixXd rows;
  Eigen::VectorXd rhs;
  int n_eq = 0;
  int n_ineq = 0;
};

RowSet stack_rows(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.cost.size());
  const int n_eq = static_cast<int>(lp.eq.rows());
  const int n_ineq = static_cast<int>(lp.ineq.rows());
  const int total = n_eq + n_ineq + 2 * n;
  RowSet s;
  s.rows.resize(total, n);
  s.rhs.resize(total);
  s.n_eq = n_eq;
  s.n_ineq = n_ineq;
  if (n_eq > 0) {
    s.rows.topRows(n_eq) = lp.eq;
    s.rhs.head(n_eq) = lp.eq_rhs;
  }
  if (n_ineq > 0) {
    s.rows.middleRows(n_eq, n_ineq) = lp.ineq;
    s.rhs.segment(n_eq, n_ineq) = lp.ineq_rhs;
  }
  s.rows.middleRows(n_eq + n_ineq, n) = Eigen::MatrixXd::Identity(n, n);
  s.rhs.segment(n_eq + n_ineq, n) = lp.lower;
  s.rows.bottomRows(n) = -Eigen::MatrixXd::Identity(n, n);
  s.rhs.tail(n) = -lp.upper;
  return s;
}

Eigen::MatrixXd working_rows(const RowSet& s, const std::vector<int>& work) {
  Eigen::MatrixXd a(work.size(), s.rows.cols());
  for (std::size_t r = 0; r < work.size(); ++r) a.row(r) = s.rows.row(work[r]);
  return a;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const Eigen::VectorXd& start, double feas_tol) {
  const int n = static_cast<int>(lp.cost.size());
  const RowSet s = stack_rows(lp);
  const int total = static_cast<int>(s.rows.rows());
  LpResult result;
  result.x = start;

  for (int r = 0; r < total; ++r) {
    const double slack = s.rows.row(r).dot(start) - s.rhs(r);
    const bool bad = r < s.n_eq ? std::abs(slack) > feas_tol : slack < -feas_tol;
    if (bad) {
      result.status = LpStatus::infeasible_start;
      return result;
    }
  }

  // Independent equality rows seed the working set.
  std::vector<int> work;
  for (int r = 0; r < s.n_eq; ++r) {
    work.push_back(r);
    Eigen::FullPivHouseholderQR<Eigen::MatrixXd> qr(working_rows(s, work).transpose());
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<int>(work.size())) work.pop_back();
  }

  const double cost_scale = std::max(1.0, lp.cost.norm());
  const int max_iter = 50 * (total + n);
  int degenerate_run = 0;
  Eigen::VectorXd& x = result.x;

  for (int iter = 0; iter < max_iter; ++iter) {
    result.iterations = iter + 1;
    const int m = static_cast<int>(work.size());
    Eigen::VectorXd p = -lp.cost;
    Eigen::MatrixXd aw;
    if (m > 0) {
      aw = working_rows(s, work);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(aw.transpose());
      const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
      const Eigen::MatrixXd z = q.rightCols(n - m);
      p = -(z * (z.transpose() * lp.cost));
    }

    if (p.norm() > 1e-11 * cost_scale) {
      // Step along the projected descent direction until a row blocks.
      double alpha = std::numeric_limits<double>::infinity();
      int blocking = -1;
      for (int r = s.n_eq; r < total; ++r) {
        if (std::find(work.begin(), work.end(), r) != work.end()) continue;
        const double slope = s.rows.row(r).dot(p);
        if (slope >= -1e-14 * s.rows.row(r).norm() * p.norm()) continue;
        const double slack = std::max(0.0, s.rows.row(r).dot(x) - s.rhs(r));
        const double step = slack / -slope;
        if (step < alpha) {
          alpha = step;
          blocking = r;
        }
      }
      if (blocking < 0) {
        result.status = LpStatus::unbounded;
        return result;
      }
      degenerate_run = alpha <= 0.0 ? degenerate_run + 1 : 0;
      x += alpha * p;
      work.push_back(blocking);
      continue;
    }

    if (m == 0) {
      result.status = LpStatus::optimal;
      break;
    }
    // Stationary on the working set: inspect multipliers of cost = A_w^T lambda.
    const Eigen::VectorXd lambda = aw.transpose().colPivHouseholderQr().solve(lp.cost);
    int drop = -1;
    double most_negative = -1e-11 * cost_scale;
    for (int r = 0; r < m; ++r) {
      if (work[r] < s.n_eq) continue;
      if (lambda(r) < most_negative) {
        // Bland-style choice once degenerate steps pile up, to rule out cycling.
        if (degenerate_run > 2 * n && drop >= 0 && work[r] > work[drop]) continue;
        most_negative = degenerate_run > 2 * n ? most_negative : lambda(r);
        drop = r;
      }
    }
    if (drop < 0) {
      result.status = LpStatus::optimal;
      for (int r = 0; r < m; ++r) {
        const int row = work[r] - s.n_eq;
        if (row >= 0 && row < s.n_ineq) {
          result.active.push_back(row);
          result.multipliers.push_back(lambda(r));
        }
      }
      return result;
    }
    work.erase(work.begin() + drop);
  }
  if (result.status != LpStatus::optimal) result.status = LpStatus::iteration_limit;
  return result;
}

}  // namespace tetrapack::optimizer
