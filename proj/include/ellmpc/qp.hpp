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

#ifndef ELLMPC_QP_HPP
#define ELLMPC_QP_HPP

#include <Eigen/Dense>

#include <string>

namespace ellmpc {

/**
 * Dense convex QP
 *
 *   min 1/2 x^T H x + g^T x
 *   s.t. lower <= x <= upper,
 *        constraint_lower <= C x <= constraint_upper.
 *
 * Infinite entries disable the corresponding side. A row with equal finite
 * lower and upper values is an equality. H must be positive definite.
 */
struct QpProblem {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd gradient;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::MatrixXd constraints;
  Eigen::VectorXd constraint_lower;
  Eigen::VectorXd constraint_upper;

  Eigen::Index num_variables() const { return gradient.size(); }
  Eigen::Index num_constraints() const { return constraints.rows(); }

  /// Empty problem of the given size: no bounds, no rows.
  static QpProblem unconstrained(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& gradient);
};

enum class QpStatus { Optimal, Infeasible, NotConvex, MaxIterations };

std::string to_string(QpStatus status);

/**
 * Solution and multipliers with the sign convention
 *   H x + g + C^T y + z = 0,
 * where y_i, z_i are >= 0 at an active upper side and <= 0 at an active lower side.
 */
struct QpSolution {
  QpStatus status = QpStatus::Infeasible;
  Eigen::VectorXd x;
  Eigen::VectorXd bound_multipliers;
  Eigen::VectorXd constraint_multipliers;
  double objective = 0.0;
  int iterations = 0;
  int active_constraints = 0;
};

struct QpOptions {
  int max_iterations = 0;  // 0 selects 10 * (n + number of one-sided rows)
  double feasibility_tol = 1e-11;
};

/// Dual active-set method: starts at the unconstrained minimizer and adds
/// violated constraints while keeping the multipliers dual feasible.
QpSolution solve_qp(const QpProblem& problem, const QpOptions& options = {});

/// max of stationarity, primal violation and complementarity residuals.
double qp_kkt_residual(const QpProblem& problem, const QpSolution& solution);

}  // namespace ellmpc

#endif  // ELLMPC_QP_HPP
