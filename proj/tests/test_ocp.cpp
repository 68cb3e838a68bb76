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

#include "ellmpc/ocp.hpp"
#include "ellmpc/controller.hpp"
#include "ellmpc/simulator.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace ellmpc {
namespace {

OcpModel demo_model(int sqp_iters = 50) {
  const Scenario sc = builtin_scenario("demo-static");
  OcpModel model{sc.config, sc.path, sc.vehicle, sc.robot_shape};
  model.config.sqp_max_iters = sqp_iters;
  return model;
}

OcpInstance start_instance(const Scenario& sc) {
  return OcpInstance{sc.x0, sc.z0, 0.0, sc.obstacles};
}

Eigen::MatrixXd constant_lambda(const OcpModel& m, int obstacles, double value) {
  return Eigen::MatrixXd::Constant(m.config.horizon + 1, obstacles, value);
}

TEST(StageCost, ZeroAtPathEnd) {
  const Path path = Path::demo();
  const OcpConfig cfg;
  EXPECT_EQ(stage_cost(path.eval(0.0), {0.0, 0.0}, InputVector::Zero(), 0.0, path, cfg), 0.0);
}

TEST(StageCost, UnitDeviationWithIdentityWeights) {
  const Path path = Path::demo();
  OcpConfig cfg;
  cfg.W_y.setIdentity();
  cfg.W_s = 1.0;
  cfg.W_u.setIdentity();
  cfg.W_nu = 1.0;
  const OutputVector y = path.eval(0.0) + OutputVector(1, 0, 0, 0);
  EXPECT_DOUBLE_EQ(stage_cost(y, {0.0, 0.0}, InputVector::Zero(), 0.0, path, cfg), 1.0);
}

TEST(StageCost, DenseQuadraticForm) {
  testing::Rng rng(40);
  const Path path = Path::demo();
  OcpConfig cfg;
  Eigen::Matrix4d l = Eigen::Matrix4d::Random();
  cfg.W_y = l * l.transpose() + Eigen::Matrix4d::Identity();
  l = Eigen::Matrix4d::Random();
  cfg.W_u = l * l.transpose() + Eigen::Matrix4d::Identity();
  cfg.W_s = 2.5;
  cfg.W_nu = 0.3;
  for (int i = 0; i < 20; ++i) {
    const double s = testing::uniform(rng, -1, 0);
    const OutputVector y = OutputVector::Random();
    const InputVector u = InputVector::Random();
    const double nu = testing::uniform(rng, -2, 2);
    Eigen::Matrix<double, 10, 1> v;
    v << y - path.eval(s), s, u, nu;
    Eigen::Matrix<double, 10, 10> w = Eigen::Matrix<double, 10, 10>::Zero();
    w.block<4, 4>(0, 0) = cfg.W_y;
    w(4, 4) = cfg.W_s;
    w.block<4, 4>(5, 5) = cfg.W_u;
    w(9, 9) = cfg.W_nu;
    EXPECT_NEAR(stage_cost(y, {s, 0.1}, u, nu, path, cfg), v.dot(w * v), 1e-10);
  }
}

TEST(Config, ValidateRejectsBadValues) {
  OcpConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.horizon = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = OcpConfig{};
  cfg.nu_min = 0.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = OcpConfig{};
  cfg.W_y(0, 0) = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = OcpConfig{};
  cfg.collision_margin = -1e-3;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(ObstacleTrack, CenterMovesLinearly) {
  const ObstacleTrack track{demo_obstacle(), Vec3(0, 0.005, 0)};
  for (double t : {0.0, 1.0, 37.5}) {
    EXPECT_LT((track.at(t).center() - (demo_obstacle().center() + t * Vec3(0, 0.005, 0))).norm(),
              1e-12);
    EXPECT_EQ(track.at(t).shape(), demo_obstacle().shape());
  }
}

TEST(Parameterized, ConvergedSolveContract) {
  const Scenario sc = builtin_scenario("demo-static");
  const OcpModel model = demo_model();
  const SolveOutput out =
      solve_parameterized(model, start_instance(sc), constant_lambda(model, 1, 0.5));
  ASSERT_EQ(out.status, SolveStatus::Converged);
  EXPECT_LE(out.kkt_residual, model.config.kkt_tol);
  EXPECT_EQ(out.state(0), sc.x0);
  EXPECT_EQ(out.timing_states(0, 0), sc.z0.s);
  EXPECT_EQ(out.timing_states(0, 1), sc.z0.s_dot);
  EXPECT_LE(max_dynamics_defect(model, out), 1e-8);
  EXPECT_GE(out.timing_states.col(1).minCoeff(), model.config.s_dot_floor);
  EXPECT_LE(out.timing_states.col(1).maxCoeff(), model.config.s_dot_max + 1e-12);
  for (int k = 0; k < out.horizon(); ++k) {
    for (int i = 0; i < kInputDim; ++i) {
      EXPECT_GE(out.inputs(k, i), model.config.u_min(i));
      EXPECT_LE(out.inputs(k, i), model.config.u_max(i));
    }
    EXPECT_GE(out.virtual_inputs(k), model.config.nu_min);
    EXPECT_LE(out.virtual_inputs(k), model.config.nu_max);
  }
  // Each accepted step does not increase the merit beyond rounding.
  ASSERT_EQ(out.merit_history.size() % 2, 0U);
  for (std::size_t i = 0; i < out.merit_history.size(); i += 2) {
    EXPECT_LE(out.merit_history[i + 1], out.merit_history[i] * (1 + 1e-12) + 1e-12);
  }
}

TEST(Parameterized, RestAtPathEndCostsNothing) {
  const OcpModel model = demo_model();
  StateVector x0 = StateVector::Zero();
  const OutputVector end = model.path.eval(0.0);
  x0.segment<3>(0) = end.head<3>();
  x0(8) = end(3);
  const OcpInstance instance{x0, {0.0, model.config.s_dot_floor}, 0.0, {}};
  const SolveOutput out =
      solve_parameterized(model, instance, Eigen::MatrixXd(model.config.horizon + 1, 0));
  EXPECT_EQ(out.status, SolveStatus::Converged);
  EXPECT_LT(out.cost, 1e-4);
  EXPECT_LT(out.inputs.cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Parameterized, FarObstacleIsInactive) {
  const Scenario sc = builtin_scenario("demo-free");
  const OcpModel model = demo_model();
  const OcpInstance free_instance = start_instance(sc);
  OcpInstance far = free_instance;
  far.obstacles.push_back({demo_obstacle().translated(Vec3(100, 0, 0.5)), Vec3::Zero()});
  const SolveOutput a = solve_parameterized(model, free_instance,
                                            Eigen::MatrixXd(model.config.horizon + 1, 0));
  const SolveOutput b = solve_parameterized(model, far, constant_lambda(model, 1, 0.5));
  EXPECT_NEAR(a.cost, b.cost, 1e-8);
  // Inactive rows: lambda perturbations leave J unchanged.
  const SolveOutput c = solve_parameterized(model, far, constant_lambda(model, 1, 0.6));
  const SolveOutput d = solve_parameterized(model, far, constant_lambda(model, 1, 0.4));
  EXPECT_LT(std::abs(c.cost - b.cost), 1e-10);
  EXPECT_LT(std::abs(d.cost - b.cost), 1e-10);
}

TEST(Parameterized, CollisionRowsHoldNearObstacle) {
  Scenario sc = builtin_scenario("demo-static");
  sc.duration = 2.7;
  const SimLog log = run(sc);
  const OcpModel model = demo_model();
  Controller helper(model, sc.controller);
  int checked = 0;
  for (std::size_t i = 100; i < log.samples.size(); i += 20) {
    const SimSample& s = log.samples[i];
    const OcpInstance instance{s.x, s.z, s.t, sc.obstacles};
    const Eigen::MatrixXd lambda = helper.minimize_lambda(
        std::vector<StateVector>(model.config.horizon + 1, s.x), sc.obstacles, s.t);
    const SolveOutput out = solve_parameterized(model, instance, lambda);
    if (out.slack_max > 0.0) continue;
    ++checked;
    // Stage 0 is the fixed measurement; rows apply from stage 1 on.
    EXPECT_LE(out.collision_values.bottomRows(model.config.horizon).maxCoeff(), 1e-6);
    EXPECT_LE(out.collision_values.bottomRows(model.config.horizon).maxCoeff(),
              -model.config.collision_margin + 1e-9);
  }
  EXPECT_GT(checked, 0);
}

TEST(Parameterized, RejectsMalformedLambda) {
  const Scenario sc = builtin_scenario("demo-static");
  const OcpModel model = demo_model();
  EXPECT_THROW(solve_parameterized(model, start_instance(sc), constant_lambda(model, 2, 0.5)),
               std::invalid_argument);
  EXPECT_THROW(solve_parameterized(model, start_instance(sc), constant_lambda(model, 1, 1.5)),
               std::invalid_argument);
}

TEST(Joint, MatchesParameterizedWithoutObstacles) {
  const Scenario sc = builtin_scenario("demo-free");
  const OcpModel model = demo_model();
  const OcpInstance instance = start_instance(sc);
  const SolveOutput p =
      solve_parameterized(model, instance, Eigen::MatrixXd(model.config.horizon + 1, 0));
  const SolveOutput j = solve_joint(model, instance);
  EXPECT_NEAR(p.cost, j.cost, 1e-8);
}

TEST(Joint, DemoScenarioReturns) {
  const Scenario sc = builtin_scenario("demo-static");
  const OcpModel model = demo_model();
  SolveOutput out;
  ASSERT_NO_THROW(out = solve_joint(model, start_instance(sc)));
  EXPECT_EQ(out.lambda_params.rows(), model.config.horizon + 1);
  EXPECT_GE(out.lambda_params.minCoeff(), 0.0);
  EXPECT_LE(out.lambda_params.maxCoeff(), 1.0);
  EXPECT_TRUE(std::isfinite(out.cost));
}

}  // namespace
}  // namespace ellmpc
