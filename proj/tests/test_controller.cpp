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
#include "ellmpc/io.hpp"
#include "ellmpc/simulator.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace ellmpc {
namespace {

struct DemoSetup {
  Scenario scenario = builtin_scenario("demo-static");
  OcpModel model() const {
    return OcpModel{scenario.config, scenario.path, scenario.vehicle, scenario.robot_shape};
  }
};

TEST(Mode, Parsing) {
  ControllerSettings s;
  parse_mode("joint", s);
  EXPECT_EQ(s.mode, ControllerMode::Joint);
  parse_mode("fixed:0.8", s);
  EXPECT_EQ(s.mode, ControllerMode::FixedLambda);
  EXPECT_DOUBLE_EQ(s.fixed_lambda, 0.8);
  parse_mode("twostage", s);
  EXPECT_EQ(s.mode, ControllerMode::TwoStage);
  EXPECT_THROW(parse_mode("fixed:1.5", s), std::invalid_argument);
  EXPECT_THROW(parse_mode("fixed:", s), std::invalid_argument);
  EXPECT_THROW(parse_mode("greedy", s), std::invalid_argument);
}

TEST(Settings, Validate) {
  ControllerSettings s;
  EXPECT_NO_THROW(s.validate());
  s.i_max = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = ControllerSettings{};
  s.epsilon = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Controller, FarObstacleMatchesObstacleFreeInput) {
  DemoSetup setup;
  const Scenario& sc = setup.scenario;
  Controller free_ctrl(setup.model(), sc.controller);
  Controller far_ctrl(setup.model(), sc.controller);
  const std::vector<ObstacleTrack> far{{demo_obstacle().translated(Vec3(100, 0, 0.5)), Vec3::Zero()}};
  const ControlResult a = free_ctrl.step(sc.x0, sc.z0, {}, 0.0);
  const ControlResult b = far_ctrl.step(sc.x0, sc.z0, far, 0.0);
  EXPECT_LT((a.u - b.u).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(a.nu, b.nu, 1e-8);
}

TEST(Controller, SymmetricSpheresGiveHalf) {
  DemoSetup setup;
  OcpModel model = setup.model();
  model.robot_shape = Mat3::Identity();
  Controller ctrl(model, ControllerSettings{});
  StateVector x = StateVector::Zero();
  const std::vector<ObstacleTrack> obstacles{{Ellipsoid::sphere(1.0, Vec3(3, 0, 0)), Vec3(-1, 0, 0)}};
  const std::vector<StateVector> candidates(model.config.horizon + 1, x);
  const Eigen::MatrixXd lambda = ctrl.minimize_lambda(candidates, obstacles, 0.0);
  EXPECT_LT((lambda.array() - 0.5).abs().maxCoeff(), 1e-4);
}

TEST(Controller, ColdStartLambdaConstantAcrossStages) {
  DemoSetup setup;
  const Scenario& sc = setup.scenario;
  Controller ctrl(setup.model(), sc.controller);
  ctrl.cold_start(sc.x0, sc.z0, sc.obstacles, 0.0);
  ASSERT_TRUE(ctrl.has_warm_start());
  const SolveOutput& warm = ctrl.warm_start();
  EXPECT_EQ(warm.timing_states(0, 0), sc.z0.s);
  EXPECT_EQ(warm.timing_states(0, 1), sc.z0.s_dot);
  EXPECT_EQ(warm.inputs.cwiseAbs().maxCoeff(), 0.0);
  const auto col = warm.lambda_params.col(0);
  EXPECT_EQ(col.maxCoeff(), col.minCoeff());
}

TEST(Controller, FirstStepConvergesFromHover) {
  DemoSetup setup;
  Scenario sc = setup.scenario;
  OcpModel model = setup.model();
  model.config.sqp_max_iters = 50;
  ControllerSettings settings = sc.controller;
  settings.wall_budget = 10.0;
  Controller ctrl(model, settings);
  const ControlResult r = ctrl.step(sc.x0, sc.z0, sc.obstacles, 0.0);
  EXPECT_EQ(r.diagnostics.status, SolveStatus::Converged);
}

TEST(Controller, SingleAlternationPerStep) {
  DemoSetup setup;
  const Scenario& sc = setup.scenario;
  ControllerSettings settings = sc.controller;
  settings.i_max = 1;
  Controller ctrl(setup.model(), settings);
  StateVector x = sc.x0;
  PathTimingState z = sc.z0;
  for (int i = 0; i < 10; ++i) {
    const ControlResult r = ctrl.step(x, z, sc.obstacles, i * 0.02);
    EXPECT_EQ(r.diagnostics.iterations, 1);
    x = step_rk4(x, r.u, sc.vehicle, 0.02);
    z = step_timing(z, r.nu, 0.02);
  }
}

TEST(Controller, LambdaUpdateIsStagewiseOptimalAndDescending) {
  DemoSetup setup;
  Scenario sc = setup.scenario;
  sc.duration = 2.6;
  const SimLog log = run(sc);
  // Rebuild a controller whose warm start sits next to the obstacle.
  Controller ctrl(setup.model(), sc.controller);
  StateVector x = sc.x0;
  PathTimingState z = sc.z0;
  for (const SimSample& s : log.samples) {
    x = s.x;
    z = s.z;
    ctrl.step(x, z, sc.obstacles, s.t);
  }
  const double t = log.samples.back().t + 0.02;
  const std::vector<StateVector> candidates = ctrl.shifted_candidates(x, t);
  const Eigen::MatrixXd previous = ctrl.warm_start().lambda_params;
  const Eigen::MatrixXd updated = ctrl.minimize_lambda(candidates, sc.obstacles, t);
  const Ellipsoid robot(sc.robot_shape, Vec3::Zero());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const Ellipsoid body = robot.translated(position_of(candidates[k]));
    const Ellipsoid obstacle = sc.obstacles[0].at(t + static_cast<double>(k) * 0.02);
    auto k_of = [&](double l) {
      return testing::k_direct(l, body.shape(), body.center(), obstacle.shape(), obstacle.center());
    };
    EXPECT_NEAR(updated(k, 0), testing::grid_argmin(k_of), 1e-4) << "stage " << k;
    EXPECT_LE(k_of(updated(k, 0)), k_of(previous(k, 0)) + 1e-12) << "stage " << k;
  }
}

TEST(Controller, ShiftedCandidatesFollowPrediction) {
  DemoSetup setup;
  const Scenario& sc = setup.scenario;
  Controller ctrl(setup.model(), sc.controller);
  ctrl.step(sc.x0, sc.z0, sc.obstacles, 0.0);
  const SolveOutput prev = ctrl.warm_start();
  StateVector meas = sc.x0;
  meas(0) += 1e-3;
  const auto c = ctrl.shifted_candidates(meas, 0.02);
  const int n = setup.scenario.config.horizon;
  ASSERT_EQ(static_cast<int>(c.size()), n + 1);
  EXPECT_EQ(c[0], meas);
  for (int k = 1; k < n; ++k) EXPECT_EQ(c[k], prev.state(k + 1));
  EXPECT_EQ(c[n], prev.state(n));
}

TEST(Controller, WallBudgetOverrunIsFlagged) {
  DemoSetup setup;
  const Scenario& sc = setup.scenario;
  ControllerSettings settings = sc.controller;
  settings.wall_budget = 1e-9;
  settings.i_max = 3;
  Controller ctrl(setup.model(), settings);
  const ControlResult r = ctrl.step(sc.x0, sc.z0, sc.obstacles, 0.0);
  EXPECT_TRUE(r.diagnostics.degraded);
  EXPECT_EQ(r.diagnostics.iterations, 1);
  EXPECT_TRUE(r.u.allFinite());
}

TEST(Controller, FixedAndJointModesRun) {
  DemoSetup setup;
  const Scenario& sc = setup.scenario;
  for (const char* mode : {"fixed:0.5", "joint"}) {
    ControllerSettings settings = sc.controller;
    parse_mode(mode, settings);
    Controller ctrl(setup.model(), settings);
    const ControlResult r = ctrl.step(sc.x0, sc.z0, sc.obstacles, 0.0);
    EXPECT_TRUE(r.u.allFinite()) << mode;
    if (settings.mode == ControllerMode::FixedLambda) {
      EXPECT_EQ(r.diagnostics.lambda.minCoeff(), 0.5);
      EXPECT_EQ(r.diagnostics.lambda.maxCoeff(), 0.5);
    }
  }
}

TEST(Diagnostics, JsonLineCarriesFields) {
  DemoSetup setup;
  const Scenario& sc = setup.scenario;
  Controller ctrl(setup.model(), sc.controller);
  const ControlResult r = ctrl.step(sc.x0, sc.z0, sc.obstacles, 0.0);
  const Json j = Json::parse(to_json_line(r.diagnostics));
  for (const char* key : {"t", "lambda0", "K0", "J", "iters", "wall_time", "slack_max", "mode"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["mode"], "twostage");
  EXPECT_DOUBLE_EQ(j["K0"].get<double>(), r.diagnostics.k0);
}

}  // namespace
}  // namespace ellmpc
