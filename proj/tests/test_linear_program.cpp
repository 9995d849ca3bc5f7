#include "doctest.h"

#include "tetrapack/linear_program.hpp"

#include <limits>
#include <random>

using tetrapack::optimizer::LinearProgram;
using tetrapack::optimizer::LpStatus;
using tetrapack::optimizer::solve_lp;

namespace {

// Optimal value by visiting every vertex: each choice of n tight rows (from
// the inequalities and bounds) that yields a feasible point.
double vertex_enumeration(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.cost.size());
  const int m = static_cast<int>(lp.ineq.rows());
  Eigen::MatrixXd rows(m + 2 * n, n);
  Eigen::VectorXd rhs(m + 2 * n);
  rows.topRows(m) = lp.ineq;
  rhs.head(m) = lp.ineq_rhs;
  for (int i = 0; i < n; ++i) {
    rows.row(m + 2 * i) = Eigen::RowVectorXd::Unit(n, i);
    rhs[m + 2 * i] = lp.lower[i];
    rows.row(m + 2 * i + 1) = -Eigen::RowVectorXd::Unit(n, i);
    rhs[m + 2 * i + 1] = -lp.upper[i];
  }
  const int total = m + 2 * n;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(n);
  auto visit = [&](auto&& self, int start, int depth) -> void {
    if (depth == n) {
      Eigen::MatrixXd A(n, n);
      Eigen::VectorXd b(n);
      for (int k = 0; k < n; ++k) {
        A.row(k) = rows.row(pick[k]);
        b[k] = rhs[pick[k]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(b);
      if (((rows * x - rhs).array() < -1e-9).any()) return;
      best = std::min(best, lp.cost.dot(x));
      return;
    }
    for (int r = start; r < total; ++r) {
      pick[depth] = r;
      self(self, r + 1, depth + 1);
    }
  };
  visit(visit, 0, 0);
  return best;
}

}  // namespace

TEST_CASE("a textbook LP") {
  // min -x - y  s.t.  x + 2y <= 4, 3x + y <= 6, x, y >= 0.
  LinearProgram lp;
  lp.cost = Eigen::Vector2d(-1, -1);
  lp.ineq.resize(2, 2);
  lp.ineq << -1, -2, -3, -1;
  lp.ineq_rhs = Eigen::Vector2d(-4, -6);
  lp.eq.resize(0, 2);
  lp.eq_rhs.resize(0);
  lp.lower = Eigen::Vector2d(0, 0);
  lp.upper = Eigen::Vector2d(10, 10);
  const auto r = solve_lp(lp, Eigen::Vector2d(0, 0));
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.x[0] == doctest::Approx(1.6));
  CHECK(r.x[1] == doctest::Approx(1.2));
  CHECK(r.active.size() == 2);
  for (double mu : r.multipliers) CHECK(mu >= -1e-12);
}

TEST_CASE("equality rows are kept") {
  // min x + 2y + z  s.t.  x + y + z >= 1, x = y, z <= 0.2.
  LinearProgram lp;
  lp.cost = Eigen::Vector3d(1, 2, 1);
  lp.ineq = Eigen::RowVector3d(1, 1, 1);
  lp.ineq_rhs = Eigen::VectorXd::Constant(1, 1.0);
  lp.eq = Eigen::RowVector3d(1, -1, 0);
  lp.eq_rhs = Eigen::VectorXd::Zero(1);
  lp.lower = Eigen::Vector3d(0, 0, 0);
  lp.upper = Eigen::Vector3d(5, 5, 0.2);
  const auto r = solve_lp(lp, Eigen::Vector3d(1, 1, 0));
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.x[0] == doctest::Approx(0.4));
  CHECK(r.x[1] == doctest::Approx(0.4));
  CHECK(r.x[2] == doctest::Approx(0.2));
}

TEST_CASE("infeasible start is reported") {
  LinearProgram lp;
  lp.cost = Eigen::Vector2d(1, 1);
  lp.ineq = Eigen::RowVector2d(1, 1);
  lp.ineq_rhs = Eigen::VectorXd::Constant(1, 1.0);
  lp.eq.resize(0, 2);
  lp.eq_rhs.resize(0);
  lp.lower = Eigen::Vector2d(-1, -1);
  lp.upper = Eigen::Vector2d(1, 1);
  CHECK(solve_lp(lp, Eigen::Vector2d(0, 0)).status == LpStatus::infeasible_start);
}

TEST_CASE("random small LPs agree with vertex enumeration") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 3;
    const int m = 3 + trial % 5;
    LinearProgram lp;
    lp.cost = Eigen::VectorXd::NullaryExpr(n, [&] { return U(rng); });
    lp.ineq = Eigen::MatrixXd::NullaryExpr(m, n, [&] { return U(rng); });
    // Negative right-hand sides keep the origin strictly feasible.
    lp.ineq_rhs = Eigen::VectorXd::NullaryExpr(m, [&] { return -0.1 - std::abs(U(rng)); });
    lp.eq.resize(0, n);
    lp.eq_rhs.resize(0);
    lp.lower = Eigen::VectorXd::Constant(n, -2.0);
    lp.upper = Eigen::VectorXd::Constant(n, 2.0);
    const auto r = solve_lp(lp, Eigen::VectorXd::Zero(n));
    CAPTURE(trial);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(((lp.ineq * r.x - lp.ineq_rhs).array() >= -1e-9).all());
    CHECK(lp.cost.dot(r.x) == doctest::Approx(vertex_enumeration(lp)).epsilon(1e-9));
  }
}
