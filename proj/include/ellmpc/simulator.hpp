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

#ifndef ELLMPC_SIMULATOR_HPP
#define ELLMPC_SIMULATOR_HPP

#include "ellmpc/controller.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ellmpc {

struct NoiseSettings {
  /// Standard deviation of the position measurement noise in m.
  double position_std = 0.0;
  /// Samples in the moving-average finite difference for velocity.
  int velocity_window = 5;
};

struct Scenario {
  std::string name = "custom";
  Path path = Path::demo();
  VehicleParams vehicle;
  Mat3 robot_shape = Mat3::Identity();
  std::vector<ObstacleTrack> obstacles;
  StateVector x0 = StateVector::Zero();
  PathTimingState z0{-1.0, 1e-6};
  double duration = 10.0;
  OcpConfig config;
  ControllerSettings controller;
  NoiseSettings noise;
  /// Plant mass differs from the model mass by this many percent.
  double mass_perturbation_pct = 0.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
  int num_samples() const;
};

struct SimSample {
  double t = 0.0;
  StateVector x = StateVector::Zero();  // true state
  InputVector u = InputVector::Zero();
  double nu = 0.0;
  PathTimingState z;
  double lambda0 = 0.0;
  /// K(lambda_{0|t}, x(t)) with the robot at the true position.
  double k_value = 0.0;
  /// min over lambda of K at the true position.
  double k_min = 0.0;
  double cost = 0.0;
  double wall_time = 0.0;
  double slack_max = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::Infeasible;
  bool degraded = false;
  /// Overlap verdict of the independent oracle against any obstacle.
  bool oracle_overlap = false;
  std::vector<Vec3> obstacle_centers;
  /// Euclidean distance from the robot to the geometric path.
  double path_deviation = 0.0;
  /// Distance to the reference point p(s(t)).
  double tracking_error = 0.0;
};

struct SimSummary {
  int samples = 0;
  int overlap_steps = 0;
  double wall_p50 = 0.0;
  double wall_p75 = 0.0;
  double wall_p95 = 0.0;
  double wall_max = 0.0;
  double k_trace_min = 0.0;
  double k_trace_max = 0.0;
  double k_min_min = 0.0;
  double k_min_max = 0.0;
  double lambda0_min = 0.0;
  double lambda0_max = 0.0;
  double lambda0_std = 0.0;
  double max_path_deviation = 0.0;
  double max_tracking_error = 0.0;
  double terminal_s = 0.0;
  double total_cost = 0.0;
  double slack_max = 0.0;
  /// Longest run of samples with |k_min| <= contact band.
  int contact_samples = 0;
  double contact_start = 0.0;
  double contact_end = 0.0;
  int degraded_steps = 0;
  int infeasible_steps = 0;
};

struct SimLog {
  std::vector<SimSample> samples;
  std::vector<std::string> diagnostics;  // JSON lines
  bool aborted = false;
  std::string abort_reason;
  SimSummary summary;
};

inline constexpr double kContactBand = 1e-3;
inline constexpr int kMaxConsecutiveInfeasible = 10;

/// Closed-loop run of the scenario with its controller settings.
SimLog run(const Scenario& scenario);

/// Same with the controller settings overridden.
SimLog run(const Scenario& scenario, const ControllerSettings& settings);

SimSummary metrics(const SimLog& log);

/// Empirical quantile: smallest sample with eCDF >= q.
double ecdf_quantile(std::vector<double> values, double q);

/// Independent runs; Parallel spreads them over OpenMP threads.
std::vector<SimLog> run_batch(const std::vector<Scenario>& scenarios, Execution execution);

/// Built-in scenarios: "demo-static", "demo-moving", "demo-free".
std::vector<std::string> builtin_scenarios();
bool is_builtin_scenario(const std::string& name);
Scenario builtin_scenario(const std::string& name);

/// Drone shape of the demo scenarios, diag(177.78, 177.78, 1975.3) in m^-2.
Mat3 demo_robot_shape();
/// Obstacle of the demo scenarios.
Ellipsoid demo_obstacle();

}  // namespace ellmpc

#endif  // ELLMPC_SIMULATOR_HPP
