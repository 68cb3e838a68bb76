/*
 Copyright 2026 The ellmpc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "ellmpc/qp.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <limits>

namespace ellmpc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int one_sided_count(const QpProblem& qp) {
  int m = 0;
  for (Eigen::Index i = 0; i < qp.num_variables(); ++i) {
    m += std::isfinite(qp.lower(i)) + std::isfinite(qp.upper(i));
  }
  for (Eigen::Index r = 0; r < qp.num_constraints(); ++r) {
    m += std::isfinite(qp.constraint_lower(r)) + std::isfinite(qp.constraint_upper(r));
  }
  return m;
}

TEST(Qp, UnconstrainedMinimizer) {
  Eigen::MatrixXd h(2, 2);
  h << 4, 1, 1, 3;
  const Eigen::VectorXd g = Eigen::Vector2d(1, 2);
  const QpSolution sol = solve_qp(QpProblem::unconstrained(h, g));
  ASSERT_EQ(sol.status, QpStatus::Optimal);
  EXPECT_LT((sol.x - h.ldlt().solve(-g)).norm(), 1e-12);
}

TEST(Qp, MatchesEnumerationOracle) {
  testing::Rng rng(30);
  int solved = 0;
  while (solved < 200) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const int rows = 1 + static_cast<int>(rng() % 4);
    const QpProblem qp = testing::random_qp(rng, n, rows);
    if (one_sided_count(qp) > 16) continue;
    const auto expect = testing::enumerate_qp(qp);
    ASSERT_TRUE(expect.has_value());
    const QpSolution sol = solve_qp(qp);
    ASSERT_EQ(sol.status, QpStatus::Optimal) << "problem " << solved;
    EXPECT_LT((sol.x - *expect).cwiseAbs().maxCoeff(), 1e-8) << "problem " << solved;
    EXPECT_LT(qp_kkt_residual(qp, sol), 1e-8);
    ++solved;
  }
}

TEST(Qp, MultiplierSignConvention) {
  // min 1/2 x^2 - 2x with x <= 1: active upper bound, z = 1 > 0.
  QpProblem qp = QpProblem::unconstrained(Eigen::MatrixXd::Identity(1, 1),
                                          Eigen::VectorXd::Constant(1, -2.0));
  qp.upper(0) = 1.0;
  QpSolution sol = solve_qp(qp);
  ASSERT_EQ(sol.status, QpStatus::Optimal);
  EXPECT_EQ(sol.x(0), 1.0);
  EXPECT_NEAR(sol.bound_multipliers(0), 1.0, 1e-12);

  // Same through a general row 2x >= 3: active lower side, y < 0.
  QpProblem row = QpProblem::unconstrained(Eigen::MatrixXd::Identity(1, 1),
                                           Eigen::VectorXd::Constant(1, 0.0));
  row.constraints = Eigen::MatrixXd::Constant(1, 1, 2.0);
  row.constraint_lower = Eigen::VectorXd::Constant(1, 3.0);
  row.constraint_upper = Eigen::VectorXd::Constant(1, kInf);
  sol = solve_qp(row);
  ASSERT_EQ(sol.status, QpStatus::Optimal);
  EXPECT_NEAR(sol.x(0), 1.5, 1e-12);
  EXPECT_NEAR(sol.constraint_multipliers(0), -0.75, 1e-12);
}

TEST(Qp, EqualityRowsHold) {
  testing::Rng rng(31);
  QpProblem qp = testing::random_qp(rng, 6, 0);
  qp.constraints = Eigen::MatrixXd::Random(2, 6);
  qp.constraint_lower = qp.constraint_upper = Eigen::Vector2d(0.1, -0.2);
  qp.lower.setConstant(-kInf);
  qp.upper.setConstant(kInf);
  const QpSolution sol = solve_qp(qp);
  ASSERT_EQ(sol.status, QpStatus::Optimal);
  EXPECT_LT((qp.constraints * sol.x - qp.constraint_upper).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Qp, DetectsInfeasibility) {
  QpProblem qp = QpProblem::unconstrained(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2));
  qp.upper(0) = 0.0;
  qp.constraints = Eigen::MatrixXd(1, 2);
  qp.constraints << 1, 0;
  qp.constraint_lower = Eigen::VectorXd::Constant(1, 1.0);
  qp.constraint_upper = Eigen::VectorXd::Constant(1, kInf);
  EXPECT_EQ(solve_qp(qp).status, QpStatus::Infeasible);
}

TEST(Qp, DetectsIndefiniteHessian) {
  Eigen::MatrixXd h(2, 2);
  h << 1, 0, 0, -1;
  EXPECT_EQ(solve_qp(QpProblem::unconstrained(h, Eigen::VectorXd::Zero(2))).status,
            QpStatus::NotConvex);
}

TEST(Qp, ActiveBoundsAreExact) {
  testing::Rng rng(32);
  for (int i = 0; i < 50; ++i) {
    const QpProblem qp = testing::random_qp(rng, 5, 2);
    const QpSolution sol = solve_qp(qp);
    ASSERT_EQ(sol.status, QpStatus::Optimal);
    for (Eigen::Index j = 0; j < qp.num_variables(); ++j) {
      EXPECT_GE(sol.x(j), qp.lower(j));
      EXPECT_LE(sol.x(j), qp.upper(j));
    }
  }
}

}  // namespace
}  // namespace ellmpc
