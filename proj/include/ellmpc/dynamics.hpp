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

#ifndef ELLMPC_DYNAMICS_HPP
#define ELLMPC_DYNAMICS_HPP

#include <Eigen/Dense>

namespace ellmpc {

inline constexpr int kStateDim = 9;
inline constexpr int kInputDim = 4;
inline constexpr int kOutputDim = 4;

/// [x y z | vx vy vz | roll pitch yaw], SI units.
using StateVector = Eigen::Matrix<double, kStateDim, 1>;
/// [thrust deviation from hover (N), roll cmd (rad), pitch cmd (rad), yaw rate cmd (rad/s)].
using InputVector = Eigen::Matrix<double, kInputDim, 1>;
/// [x y z yaw].
using OutputVector = Eigen::Matrix<double, kOutputDim, 1>;
using StateJacobian = Eigen::Matrix<double, kStateDim, kStateDim>;
using InputJacobian = Eigen::Matrix<double, kStateDim, kInputDim>;

namespace idx {
inline constexpr int kPos = 0;
inline constexpr int kVel = 3;
inline constexpr int kRoll = 6;
inline constexpr int kPitch = 7;
inline constexpr int kYaw = 8;

inline constexpr int kThrust = 0;
inline constexpr int kRollCmd = 1;
inline constexpr int kPitchCmd = 2;
inline constexpr int kYawRateCmd = 3;
}  // namespace idx

inline Eigen::Vector3d position_of(const StateVector& x) { return x.segment<3>(idx::kPos); }
inline Eigen::Vector3d velocity_of(const StateVector& x) { return x.segment<3>(idx::kVel); }
inline Eigen::Vector3d attitude_of(const StateVector& x) { return x.segment<3>(idx::kRoll); }

struct VehicleParams {
  double mass = 0.031;
  double gravity = 9.81;
  double roll_lag = 0.1;
  double pitch_lag = 0.1;

  double hover_thrust() const { return mass * gravity; }
  /// Throws std::invalid_argument unless every field is strictly positive.
  void validate() const;
};

struct PathTimingState {
  double s = 0.0;
  double s_dot = 0.0;
};

/// Continuous quadrotor model with first-order roll/pitch lags.
StateVector f_continuous(const StateVector& x, const InputVector& u, const VehicleParams& p);

/// One classical RK4 step with the input held constant.
StateVector step_rk4(const StateVector& x, const InputVector& u, const VehicleParams& p,
                     double delta);

/// Exact zero-order-hold step of the double-integrator timing law.
PathTimingState step_timing(PathTimingState z, double nu, double delta);

OutputVector output(const StateVector& x);

struct StepJacobians {
  StateJacobian state;
  InputJacobian input;
};

/// Analytic Jacobians of f_continuous.
StepJacobians continuous_jacobians(const StateVector& x, const InputVector& u,
                                   const VehicleParams& p);

/// Exact Jacobians of step_rk4, chained through the four stages.
StepJacobians jacobians(const StateVector& x, const InputVector& u, const VehicleParams& p,
                        double delta);

/// step_rk4 and its Jacobians in one pass.
StateVector step_rk4_with_jacobians(const StateVector& x, const InputVector& u,
                                    const VehicleParams& p, double delta, StepJacobians& jac);

}  // namespace ellmpc

#endif  // ELLMPC_DYNAMICS_HPP
