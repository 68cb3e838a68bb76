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

#include "ellmpc/controller.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace ellmpc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int elapsed_steps(double t_now, double t_prev, double delta, int horizon) {
  const long shift = std::lround((t_now - t_prev) / delta);
  return static_cast<int>(std::clamp<long>(shift, 0, horizon));
}

}  // namespace

std::string to_string(ControllerMode mode) {
  switch (mode) {
    case ControllerMode::TwoStage:
      return "twostage";
    case ControllerMode::FixedLambda:
      return "fixed";
    case ControllerMode::Joint:
      return "joint";
  }
  return "unknown";
}

void ControllerSettings::validate() const {
  if (i_max < 1) throw std::invalid_argument("i_max must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(lambda_tol > 0.0 && lambda_tol < 0.5)) {
    throw std::invalid_argument("lambda_tol must lie in (0, 0.5)");
  }
  if (mode == ControllerMode::FixedLambda && !(fixed_lambda >= 0.0 && fixed_lambda <= 1.0)) {
    throw std::invalid_argument("fixed lambda must lie in [0, 1]");
  }
}

void parse_mode(const std::string& text, ControllerSettings& settings) {
  if (text == "twostage") {
    settings.mode = ControllerMode::TwoStage;
    return;
  }
  if (text == "joint") {
    settings.mode = ControllerMode::Joint;
    return;
  }
  const std::string prefix = "fixed:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string value = text.substr(prefix.size());
    std::size_t used = 0;
    double lambda = 0.0;
    try {
      lambda = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size() || !(lambda >= 0.0 && lambda <= 1.0)) {
      throw std::invalid_argument("fixed mode needs a lambda in [0, 1], got '" + value + "'");
    }
    settings.mode = ControllerMode::FixedLambda;
    settings.fixed_lambda = lambda;
    return;
  }
  throw std::invalid_argument("unknown mode '" + text + "' (expected twostage, joint or fixed:<lambda>)");
}

std::string to_json_line(const StepDiagnostics& diag) {
  nlohmann::json j;
  j["t"] = diag.t;
  j["lambda0"] = diag.lambda0;
  j["K0"] = diag.k0;
  j["J"] = diag.cost;
  j["iters"] = diag.iterations;
  j["wall_time"] = diag.wall_time;
  j["slack_max"] = diag.slack_max;
  j["mode"] = to_string(diag.mode);
  j["status"] = to_string(diag.status);
  j["sqp_iters"] = diag.sqp_iterations;
  j["kkt"] = diag.kkt_residual;
  j["degraded"] = diag.degraded;
  return j.dump();
}

Controller::Controller(OcpModel model, ControllerSettings settings)
    : model_(std::move(model)),
      settings_(settings),
      robot_(model_.robot_shape, Vec3::Zero()) {
  settings_.validate();
  model_.config.validate();
  if (!robot_.strictly_pd()) {
    throw std::invalid_argument("robot shape must be strictly positive definite");
  }
}

double Controller::budget() const {
  return settings_.wall_budget > 0.0 ? settings_.wall_budget : model_.config.delta;
}

Eigen::MatrixXd Controller::minimize_lambda(const std::vector<StateVector>& candidates,
                                            const std::vector<ObstacleTrack>& obstacles,
                                            double t_now) const {
  const int stages = static_cast<int>(candidates.size());
  const int n_obs = static_cast<int>(obstacles.size());
  std::vector<Ellipsoid> robots;
  std::vector<Ellipsoid> others;
  robots.reserve(stages * n_obs);
  others.reserve(stages * n_obs);
  for (int o = 0; o < n_obs; ++o) {
    for (int k = 0; k < stages; ++k) {
      robots.push_back(robot_.translated(position_of(candidates[k])));
      others.push_back(obstacles[o].at(t_now + k * model_.config.delta));
    }
  }
  const auto verdicts =
      minimize_k_batch(robots, others, settings_.execution, settings_.lambda_tol);
  Eigen::MatrixXd lambda(stages, n_obs);
  for (int o = 0; o < n_obs; ++o)
    for (int k = 0; k < stages; ++k) lambda(k, o) = verdicts[o * stages + k].lambda_star;
  return lambda;
}

std::vector<StateVector> Controller::shifted_candidates(const StateVector& x_meas,
                                                        double t_now) const {
  const int n_steps = model_.config.horizon;
  std::vector<StateVector> candidates(n_steps + 1, x_meas);
  if (!warm_) return candidates;
  const int shift = elapsed_steps(t_now, warm_->t_solve, model_.config.delta, n_steps);
  for (int k = 1; k <= n_steps; ++k) {
    candidates[k] = warm_->state(std::min(k + shift, n_steps));
  }
  return candidates;
}

void Controller::cold_start(const StateVector& x_meas, PathTimingState z0,
                            const std::vector<ObstacleTrack>& obstacles, double t_now) {
  const int n_steps = model_.config.horizon;
  const int n_obs = static_cast<int>(obstacles.size());
  SolveOutput guess;
  guess.states = x_meas.transpose().replicate(n_steps + 1, 1);
  guess.timing_states.resize(n_steps + 1, 2);
  guess.timing_states.col(0).setConstant(z0.s);
  guess.timing_states.col(1).setConstant(z0.s_dot);
  guess.inputs = Eigen::MatrixXd::Zero(n_steps, kInputDim);
  guess.virtual_inputs = Eigen::VectorXd::Zero(n_steps);
  guess.slacks = Eigen::MatrixXd::Zero(n_steps + 1, n_obs);
  guess.t_solve = t_now;
  const std::vector<StateVector> constant(n_steps + 1, x_meas);
  guess.lambda_params = minimize_lambda(constant, obstacles, t_now);
  guess.collision_values = Eigen::MatrixXd::Zero(n_steps + 1, n_obs);
  guess.status = SolveStatus::MaxIters;
  warm_ = std::move(guess);
}

ControlResult Controller::step(const StateVector& x_meas, PathTimingState z_now,
                               const std::vector<ObstacleTrack>& obstacles, double t_now) {
  const auto start = Clock::now();
  const int n_steps = model_.config.horizon;
  const int n_obs = static_cast<int>(obstacles.size());
  if (!warm_ || warm_->slacks.cols() != n_obs) cold_start(x_meas, z_now, obstacles, t_now);

  OcpInstance instance;
  instance.x0 = x_meas;
  instance.z0 = z_now;
  instance.t_now = t_now;
  instance.obstacles = obstacles;

  ControlResult result;
  StepDiagnostics& diag = result.diagnostics;
  diag.t = t_now;
  diag.mode = settings_.mode;

  SolveOutput solution;
  Eigen::MatrixXd lambda;
  int iterations = 0;
  if (settings_.mode == ControllerMode::Joint) {
    solution = solve_joint(model_, instance, &*warm_);
    lambda = solution.lambda_params;
    iterations = 1;
  } else {
    std::vector<StateVector> candidates = shifted_candidates(x_meas, t_now);
    const int shift = elapsed_steps(t_now, warm_->t_solve, model_.config.delta, n_steps);
    Eigen::MatrixXd previous(n_steps + 1, n_obs);
    for (int k = 0; k <= n_steps; ++k) {
      previous.row(k) = warm_->lambda_params.row(std::min(k + shift, n_steps));
    }
    const SolveOutput* warm = &*warm_;
    while (iterations < settings_.i_max && (iterations == 0 || seconds_since(start) < budget())) {
      if (settings_.mode == ControllerMode::FixedLambda) {
        lambda = Eigen::MatrixXd::Constant(n_steps + 1, n_obs, settings_.fixed_lambda);
      } else {
        lambda = minimize_lambda(candidates, obstacles, t_now);
      }
      solution = solve_parameterized(model_, instance, lambda, warm);
      warm = &solution;
      ++iterations;
      const double change =
          n_obs > 0 ? (lambda - previous).cwiseAbs().maxCoeff() : 0.0;
      if (change < settings_.epsilon) break;
      previous = lambda;
      for (int k = 0; k <= n_steps; ++k) candidates[k] = solution.state(k);
    }
  }

  result.u = solution.input(0);
  result.nu = solution.virtual_inputs(0);

  diag.lambda = lambda;
  diag.iterations = iterations;
  diag.sqp_iterations = solution.sqp_iterations;
  diag.cost = solution.cost;
  diag.slack_max = solution.slack_max;
  diag.kkt_residual = solution.kkt_residual;
  diag.status = solution.status;
  diag.k0 = 0.0;
  diag.lambda0 = 0.0;
  const Ellipsoid robot = robot_.translated(position_of(x_meas));
  for (int o = 0; o < n_obs; ++o) {
    const double k = k_fused(lambda(0, o), robot, obstacles[o].at(t_now)).k_value;
    if (o == 0 || k > diag.k0) {
      diag.k0 = k;
      diag.lambda0 = lambda(0, o);
    }
  }

  warm_ = std::move(solution);
  diag.wall_time = seconds_since(start);
  diag.degraded = diag.wall_time > budget();
  return result;
}

}  // namespace ellmpc
