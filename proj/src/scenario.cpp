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

#include "ellmpc/simulator.hpp"

#include <algorithm>
#include <stdexcept>

namespace ellmpc {

namespace {

// Margin alpha that keeps the closed loop strictly clear of the obstacle.
constexpr double kDemoCollisionMargin = 5e-4;
constexpr double kDemoDuration = 10.0;
// Progress weight and yaw weight of the demo runs. With W_s = 1 and a yaw
// weight of 5 the short horizon barely advances s along the demo path.
constexpr double kDemoProgressWeight = 5.0;
constexpr double kDemoYawWeight = 0.5;
// SQP iterations per control step; keeps the step inside the 20 ms period.
constexpr int kDemoSqpIterations = 5;

Scenario demo_base(const std::string& name) {
  Scenario sc;
  sc.name = name;
  sc.path = Path::demo();
  sc.vehicle = VehicleParams{};
  sc.robot_shape = demo_robot_shape();
  sc.config = OcpConfig::defaults_for(sc.vehicle);
  sc.config.horizon = 20;
  sc.config.delta = 0.02;
  sc.config.collision_margin = kDemoCollisionMargin;
  sc.config.W_s = kDemoProgressWeight;
  sc.config.W_y(3, 3) = kDemoYawWeight;
  sc.config.sqp_max_iters = kDemoSqpIterations;
  const OutputVector start = sc.path.eval(sc.path.s0());
  sc.x0.setZero();
  sc.x0.segment<3>(idx::kPos) = start.head<3>();
  sc.x0(idx::kYaw) = start(3);
  sc.z0 = PathTimingState{sc.path.s0(), sc.config.s_dot_floor};
  sc.duration = kDemoDuration;
  return sc;
}

}  // namespace

Mat3 demo_robot_shape() { return Vec3(177.78, 177.78, 1975.3).asDiagonal(); }

Ellipsoid demo_obstacle() {
  Mat3 b;
  b << 234.57, -67.42, 0.0,
      -67.42, 190.76, 0.0,
      0.0, 0.0, 35.44;
  return Ellipsoid(b, Vec3(0.2, 0.16, 0.5));
}

std::vector<std::string> builtin_scenarios() { return {"demo-static", "demo-moving", "demo-free"}; }

bool is_builtin_scenario(const std::string& name) {
  const auto names = builtin_scenarios();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Scenario builtin_scenario(const std::string& name) {
  if (name == "demo-static") {
    Scenario sc = demo_base(name);
    sc.obstacles.push_back(ObstacleTrack{demo_obstacle(), Vec3::Zero()});
    return sc;
  }
  if (name == "demo-moving") {
    Scenario sc = demo_base(name);
    sc.obstacles.push_back(ObstacleTrack{demo_obstacle(), Vec3(0.0, 0.005, 0.0)});
    return sc;
  }
  if (name == "demo-free") return demo_base(name);
  throw std::invalid_argument("unknown built-in scenario '" + name + "'");
}

}  // namespace ellmpc
