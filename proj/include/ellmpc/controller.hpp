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

#ifndef ELLMPC_CONTROLLER_HPP
#define ELLMPC_CONTROLLER_HPP

#include "ellmpc/geometry_batch.hpp"
#include "ellmpc/ocp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ellmpc {

enum class ControllerMode { TwoStage, FixedLambda, Joint };

std::string to_string(ControllerMode mode);

struct ControllerSettings {
  ControllerMode mode = ControllerMode::TwoStage;
  /// lambda held over horizon and time in FixedLambda mode.
  double fixed_lambda = 0.5;
  int i_max = 1;
  double epsilon = 1e-3;
  /// Wall-clock budget per step in seconds; <= 0 selects the OCP step delta.
  double wall_budget = 0.0;
  double lambda_tol = kDefaultLambdaTolerance;
  /// How the per-stage lambda minimizations are dispatched.
  Execution execution = Execution::Serial;

  void validate() const;
};

/**
 * Parses "twostage", "joint" or "fixed:<lambda>" into `settings`.
 * Throws std::invalid_argument on anything else.
 */
void parse_mode(const std::string& text, ControllerSettings& settings);

struct StepDiagnostics {
  double t = 0.0;
  /// lambda_{0|t} and K(lambda_{0|t}, x_meas) of the most critical obstacle.
  double lambda0 = 0.0;
  double k0 = 0.0;
  Eigen::MatrixXd lambda;  // (N+1) x obstacles, as used by the last solve
  double cost = 0.0;
  int iterations = 0;
  int sqp_iterations = 0;
  double wall_time = 0.0;
  double slack_max = 0.0;
  double kkt_residual = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  ControllerMode mode = ControllerMode::TwoStage;
  bool degraded = false;
};

/// One JSON object {t, lambda0, K0, J, iters, wall_time, slack_max, mode, ...} without newline.
std::string to_json_line(const StepDiagnostics& diag);

struct ControlResult {
  InputVector u = InputVector::Zero();
  double nu = 0.0;
  StepDiagnostics diagnostics;
};

/**
 * Two-stage MPC loop: per-stage lambda minimization alternating with the
 * parameterized OCP, warm started from the previous step.
 *
 * Not thread safe; one instance per control loop.
 */
class Controller {
 public:
  Controller(OcpModel model, ControllerSettings settings);

  /// Constant-state candidate trajectory, hover inputs and matching lambda.
  void cold_start(const StateVector& x_meas, PathTimingState z0,
                  const std::vector<ObstacleTrack>& obstacles, double t_now);

  /// Cold starts implicitly on the first call.
  ControlResult step(const StateVector& x_meas, PathTimingState z_now,
                     const std::vector<ObstacleTrack>& obstacles, double t_now);

  /// argmin_lambda K(lambda, candidate_k) per stage and obstacle, (N+1) x obstacles.
  Eigen::MatrixXd minimize_lambda(const std::vector<StateVector>& candidates,
                                  const std::vector<ObstacleTrack>& obstacles,
                                  double t_now) const;

  /// Candidate states x_{k|t}: measurement, shifted prediction, repeated terminal state.
  std::vector<StateVector> shifted_candidates(const StateVector& x_meas, double t_now) const;

  bool has_warm_start() const { return warm_.has_value(); }
  const SolveOutput& warm_start() const { return *warm_; }
  const OcpModel& model() const { return model_; }
  const ControllerSettings& settings() const { return settings_; }

 private:
  double budget() const;

  OcpModel model_;
  ControllerSettings settings_;
  Ellipsoid robot_;
  std::optional<SolveOutput> warm_;
};

}  // namespace ellmpc

#endif  // ELLMPC_CONTROLLER_HPP
