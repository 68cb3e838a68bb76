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

#include "ellmpc/dynamics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace ellmpc {
namespace {

using testing::Rng;

StateVector random_state(Rng& rng) {
  StateVector x;
  x.segment<3>(0) = testing::random_vec(rng, -2, 2);
  x.segment<3>(3) = testing::random_vec(rng, -1, 1);
  x.segment<3>(6) = testing::random_vec(rng, -0.4, 0.4);
  x(8) = testing::uniform(rng, -3, 3);
  return x;
}

InputVector random_input(Rng& rng) {
  return InputVector(testing::uniform(rng, -0.15, 0.15), testing::uniform(rng, -0.35, 0.35),
                     testing::uniform(rng, -0.35, 0.35), testing::uniform(rng, -1, 1));
}

TEST(Continuous, HoverIsFixedPoint) {
  EXPECT_EQ(f_continuous(StateVector::Zero(), InputVector::Zero(), VehicleParams{}),
            StateVector::Zero());
}

TEST(Continuous, DoubledThrustAcceleratesUp) {
  const VehicleParams p;
  const StateVector dx =
      f_continuous(StateVector::Zero(), InputVector(p.mass * p.gravity, 0, 0, 0), p);
  StateVector expect = StateVector::Zero();
  expect(5) = p.gravity;
  EXPECT_LT((dx - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Continuous, RollLagRow) {
  const VehicleParams p;
  StateVector x = StateVector::Zero();
  x(6) = 0.1;
  EXPECT_DOUBLE_EQ(f_continuous(x, InputVector::Zero(), p)(6), -0.1 / p.roll_lag);
}

TEST(Continuous, MatchesRotationMatrixForm) {
  Rng rng(20);
  const VehicleParams p;
  for (int i = 0; i < 100; ++i) {
    const StateVector x = random_state(rng);
    const InputVector u = random_input(rng);
    EXPECT_LT((f_continuous(x, u, p) - testing::quad_field(x, u, p)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Rk4, HoverInvariantForAnyStep) {
  for (double delta : {1e-3, 0.02, 0.05, 0.1}) {
    EXPECT_EQ(step_rk4(StateVector::Zero(), InputVector::Zero(), VehicleParams{}, delta),
              StateVector::Zero());
  }
}

TEST(Rk4, YawRateIntegratedExactly) {
  const StateVector x = step_rk4(StateVector::Zero(), InputVector(0, 0, 0, 1), VehicleParams{}, 0.02);
  EXPECT_DOUBLE_EQ(x(8), 0.02);
}

TEST(Rk4, CloseToFineIntegrationNearHover) {
  // Away from hover the single-step truncation error of the attitude lag
  // grows with |cmd - angle|; see the acceptance suite for the full box.
  Rng rng(21);
  const VehicleParams p;
  for (int i = 0; i < 100; ++i) {
    StateVector x = random_state(rng);
    x.segment<2>(6) = Eigen::Vector2d(testing::uniform(rng, -0.1, 0.1), testing::uniform(rng, -0.1, 0.1));
    InputVector u = random_input(rng);
    u(1) = x(6) + testing::uniform(rng, -0.1, 0.1);
    u(2) = x(7) + testing::uniform(rng, -0.1, 0.1);
    const StateVector fine = testing::quad_fine(x, u, p, 0.02);
    EXPECT_LT((step_rk4(x, u, p, 0.02) - fine).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Rk4, FourthOrderConvergence) {
  Rng rng(22);
  const VehicleParams p;
  const StateVector x = random_state(rng);
  const InputVector u = random_input(rng);
  const StateVector exact = testing::quad_fine(x, u, p, 0.02, 4000);
  auto err = [&](int sub) {
    StateVector y = x;
    for (int i = 0; i < sub; ++i) y = step_rk4(y, u, p, 0.02 / sub);
    return (y - exact).cwiseAbs().maxCoeff();
  };
  EXPECT_GT(err(1) / err(2), 12.0);
  EXPECT_LT(err(1) / err(2), 20.0);
}

TEST(Rk4, LagContractionFactor) {
  const VehicleParams p;
  for (double delta : {0.005, 0.01}) {
    StateVector x = StateVector::Zero();
    x(6) = 1.0;
    const double factor = step_rk4(x, InputVector::Zero(), p, delta)(6);
    EXPECT_NEAR(factor, std::exp(-delta / p.roll_lag), 1e-6);
  }
}

TEST(Jacobians, MatchCentralDifferences) {
  Rng rng(23);
  const VehicleParams p;
  for (int i = 0; i < 100; ++i) {
    const StateVector x = random_state(rng);
    const InputVector u = random_input(rng);
    const StepJacobians jac = jacobians(x, u, p, 0.02);
    const double h = 1e-6;
    for (int j = 0; j < kStateDim; ++j) {
      StateVector xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      const StateVector fd = (step_rk4(xp, u, p, 0.02) - step_rk4(xm, u, p, 0.02)) / (2 * h);
      EXPECT_LT((fd - jac.state.col(j)).cwiseAbs().maxCoeff(),
                1e-5 * (1.0 + jac.state.col(j).cwiseAbs().maxCoeff()));
    }
    for (int j = 0; j < kInputDim; ++j) {
      InputVector up = u, um = u;
      up(j) += h;
      um(j) -= h;
      const StateVector fd = (step_rk4(x, up, p, 0.02) - step_rk4(x, um, p, 0.02)) / (2 * h);
      EXPECT_LT((fd - jac.input.col(j)).cwiseAbs().maxCoeff(),
                1e-5 * (1.0 + jac.input.col(j).cwiseAbs().maxCoeff()));
    }
  }
}

TEST(Jacobians, HoverStructureAndYawDecoupling) {
  const StepJacobians jac = jacobians(StateVector::Zero(), InputVector::Zero(), VehicleParams{}, 0.02);
  EXPECT_LT((jac.state.block<3, 3>(0, 3) - 0.02 * Eigen::Matrix3d::Identity()).norm(), 1e-12);
  EXPECT_DOUBLE_EQ(jac.input(8, 3), 0.02);
  EXPECT_EQ(jac.input(8, 0), 0.0);
  EXPECT_EQ(jac.input(8, 1), 0.0);
  EXPECT_EQ(jac.input(8, 2), 0.0);
}

TEST(Jacobians, CombinedStepAgrees) {
  Rng rng(24);
  const VehicleParams p;
  const StateVector x = random_state(rng);
  const InputVector u = random_input(rng);
  StepJacobians combined;
  const StateVector next = step_rk4_with_jacobians(x, u, p, 0.02, combined);
  const StepJacobians separate = jacobians(x, u, p, 0.02);
  EXPECT_EQ(next, step_rk4(x, u, p, 0.02));
  EXPECT_LT((combined.state - separate.state).norm(), 1e-14);
  EXPECT_LT((combined.input - separate.input).norm(), 1e-14);
}

TEST(Timing, Examples) {
  const PathTimingState rest = step_timing({-1.0, 0.0}, 0.0, 0.02);
  EXPECT_EQ(rest.s, -1.0);
  EXPECT_EQ(rest.s_dot, 0.0);
  const PathTimingState moving = step_timing({-1.0, 0.5}, 0.0, 0.02);
  EXPECT_DOUBLE_EQ(moving.s, -0.99);
  EXPECT_DOUBLE_EQ(moving.s_dot, 0.5);
}

TEST(Timing, EqualsRk4OnDoubleIntegrator) {
  Rng rng(25);
  for (int i = 0; i < 100; ++i) {
    const PathTimingState z{testing::uniform(rng, -1, 0), testing::uniform(rng, 0, 0.3)};
    const double nu = testing::uniform(rng, -2, 2);
    const double h = 0.02;
    // RK4 on (s, s_dot)' = (s_dot, nu).
    auto f = [&](const Eigen::Vector2d& y) { return Eigen::Vector2d(y(1), nu); };
    const Eigen::Vector2d y(z.s, z.s_dot);
    const Eigen::Vector2d k1 = f(y), k2 = f(y + h / 2 * k1), k3 = f(y + h / 2 * k2), k4 = f(y + h * k3);
    const Eigen::Vector2d rk = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    const PathTimingState next = step_timing(z, nu, h);
    EXPECT_NEAR(next.s, rk(0), 1e-14);
    EXPECT_NEAR(next.s_dot, rk(1), 1e-14);
  }
}

TEST(Output, Projection) {
  StateVector x = StateVector::Zero();
  EXPECT_EQ(output(x), OutputVector::Zero());
  x.segment<3>(0) = Vec3(1, 2, 3);
  x(8) = 0.5;
  EXPECT_EQ(output(x), OutputVector(1, 2, 3, 0.5));
  EXPECT_EQ(output(x).size(), 4);
}

TEST(Vehicle, ValidateRejectsNonPositive) {
  VehicleParams p;
  EXPECT_NO_THROW(p.validate());
  p.roll_lag = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace ellmpc
