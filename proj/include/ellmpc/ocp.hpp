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

#ifndef ELLMPC_OCP_HPP
#define ELLMPC_OCP_HPP

#include "ellmpc/dynamics.hpp"
#include "ellmpc/geometry.hpp"
#include "ellmpc/path.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ellmpc {

/**
 * Weights, bounds and solver settings of the path-following OCP.
 *
 * None of the numeric defaults are measured quantities; they are tuned so the
 * built-in demo scenarios fly the path at desk scale.
 */
struct OcpConfig {
  int horizon = 20;
  double delta = 0.02;

  Eigen::Matrix4d W_y = Eigen::Vector4d(50.0, 50.0, 50.0, 5.0).asDiagonal();
  double W_s = 1.0;
  Eigen::Matrix4d W_u = Eigen::Vector4d(1.0, 10.0, 10.0, 1.0).asDiagonal();
  double W_nu = 0.1;

  InputVector u_min = InputVector(-0.5 * 0.031 * 9.81, -0.35, -0.35, -1.0);
  InputVector u_max = InputVector(0.5 * 0.031 * 9.81, 0.35, 0.35, 1.0);
  double nu_min = -2.0;
  double nu_max = 2.0;
  double s_dot_max = 0.3;
  /// Lower bound realizing the open constraint s_dot > 0.
  double s_dot_floor = 1e-6;

  std::optional<StateVector> state_min;
  std::optional<StateVector> state_max;

  double soft_penalty_l1 = 1e3;
  double soft_penalty_l2 = 1e4;
  double collision_margin = 0.0;

  int sqp_max_iters = 10;
  double kkt_tol = 1e-6;
  /// Hessian regularization of the lambda block in the joint formulation.
  double rho_lambda = 1e-4;

  /// Thrust bounds of +-0.5 m g for the given vehicle, everything else default.
  static OcpConfig defaults_for(const VehicleParams& vehicle);

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

/// Ellipsoidal obstacle translating with constant velocity.
struct ObstacleTrack {
  Ellipsoid base;
  Vec3 velocity = Vec3::Zero();

  Vec3 center_at(double t) const { return base.center() + velocity * t; }
  Ellipsoid at(double t) const { return base.translated(center_at(t)); }
};

/// Everything about the OCP that does not change between control steps.
struct OcpModel {
  OcpConfig config;
  Path path;
  VehicleParams vehicle;
  /// Shape of the robot ellipsoid; its center is the vehicle position.
  Mat3 robot_shape;
};

/// Per-solve data: measured state, timing state, clock and obstacles.
struct OcpInstance {
  StateVector x0 = StateVector::Zero();
  PathTimingState z0;
  double t_now = 0.0;
  std::vector<ObstacleTrack> obstacles;
};

enum class SolveStatus { Converged, MaxIters, Infeasible };

std::string to_string(SolveStatus status);

struct SolveOutput {
  Eigen::MatrixXd states;          // (N+1) x 9
  Eigen::MatrixXd timing_states;   // (N+1) x 2, columns s and s_dot
  Eigen::MatrixXd inputs;          // N x 4
  Eigen::VectorXd virtual_inputs;  // N
  Eigen::MatrixXd lambda_params;   // (N+1) x obstacles
  Eigen::MatrixXd slacks;          // (N+1) x obstacles
  Eigen::MatrixXd collision_values;  // K(lambda_k, x_k), (N+1) x obstacles
  double cost = 0.0;
  double kkt_residual = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  double wall_time = 0.0;
  double slack_max = 0.0;
  double max_defect = 0.0;
  double t_solve = 0.0;
  int sqp_iterations = 0;
  /// Per accepted step: merit before, merit after (same penalty weight).
  std::vector<double> merit_history;

  int horizon() const { return static_cast<int>(inputs.rows()); }
  StateVector state(int k) const { return states.row(k).transpose(); }
  InputVector input(int k) const { return inputs.row(k).transpose(); }
};

/// Squared W-norm of [y - p(s); s; u; nu].
double stage_cost(const OutputVector& y, PathTimingState z, const InputVector& u, double nu,
                  const Path& path, const OcpConfig& config);

/// Robot ellipsoid placed at the position of state x.
Ellipsoid robot_at(const OcpModel& model, const StateVector& x);

/**
 * Collision-avoidant OCP with lambda fixed to `lambda_bar` ((N+1) x obstacles).
 *
 * Decision variables are the inputs, virtual inputs and one slack per
 * collision row; states follow from forward simulation. `warm` may come from
 * an earlier time, in which case it is shifted by the elapsed number of steps.
 */
SolveOutput solve_parameterized(const OcpModel& model, const OcpInstance& instance,
                                const Eigen::MatrixXd& lambda_bar,
                                const SolveOutput* warm = nullptr);

/// Same OCP with lambda as decision variables, regularized by rho_lambda.
SolveOutput solve_joint(const OcpModel& model, const OcpInstance& instance,
                        const SolveOutput* warm = nullptr);

/// Recomputes the maximum dynamics defect of a returned trajectory.
double max_dynamics_defect(const OcpModel& model, const SolveOutput& out);

}  // namespace ellmpc

#endif  // ELLMPC_OCP_HPP
