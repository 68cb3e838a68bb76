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

#include <cmath>
#include <stdexcept>

namespace ellmpc {

void VehicleParams::validate() const {
  if (!(mass > 0.0) || !(gravity > 0.0) || !(roll_lag > 0.0) || !(pitch_lag > 0.0)) {
    throw std::invalid_argument("vehicle parameters must be strictly positive");
  }
}

StateVector f_continuous(const StateVector& x, const InputVector& u, const VehicleParams& p) {
  const double sphi = std::sin(x(idx::kRoll)), cphi = std::cos(x(idx::kRoll));
  const double sth = std::sin(x(idx::kPitch)), cth = std::cos(x(idx::kPitch));
  const double spsi = std::sin(x(idx::kYaw)), cpsi = std::cos(x(idx::kYaw));
  const double accel = u(idx::kThrust) / p.mass + p.gravity;

  StateVector dx;
  dx.segment<3>(idx::kPos) = x.segment<3>(idx::kVel);
  dx(idx::kVel + 0) = (sphi * spsi + cphi * cpsi * sth) * accel;
  dx(idx::kVel + 1) = (cphi * spsi * sth - cpsi * sphi) * accel;
  dx(idx::kVel + 2) = -p.gravity + cphi * cth * accel;
  dx(idx::kRoll) = (u(idx::kRollCmd) - x(idx::kRoll)) / p.roll_lag;
  dx(idx::kPitch) = (u(idx::kPitchCmd) - x(idx::kPitch)) / p.pitch_lag;
  dx(idx::kYaw) = u(idx::kYawRateCmd);
  return dx;
}

StepJacobians continuous_jacobians(const StateVector& x, const InputVector& u,
                                   const VehicleParams& p) {
  const double sphi = std::sin(x(idx::kRoll)), cphi = std::cos(x(idx::kRoll));
  const double sth = std::sin(x(idx::kPitch)), cth = std::cos(x(idx::kPitch));
  const double spsi = std::sin(x(idx::kYaw)), cpsi = std::cos(x(idx::kYaw));
  const double accel = u(idx::kThrust) / p.mass + p.gravity;

  StepJacobians jac;
  jac.state.setZero();
  jac.input.setZero();
  jac.state.block<3, 3>(idx::kPos, idx::kVel).setIdentity();

  const int vx = idx::kVel, vy = idx::kVel + 1, vz = idx::kVel + 2;
  jac.state(vx, idx::kRoll) = (cphi * spsi - sphi * cpsi * sth) * accel;
  jac.state(vx, idx::kPitch) = cphi * cpsi * cth * accel;
  jac.state(vx, idx::kYaw) = (sphi * cpsi - cphi * spsi * sth) * accel;
  jac.state(vy, idx::kRoll) = (-sphi * spsi * sth - cpsi * cphi) * accel;
  jac.state(vy, idx::kPitch) = cphi * spsi * cth * accel;
  jac.state(vy, idx::kYaw) = (cphi * cpsi * sth + spsi * sphi) * accel;
  jac.state(vz, idx::kRoll) = -sphi * cth * accel;
  jac.state(vz, idx::kPitch) = -cphi * sth * accel;
  jac.state(idx::kRoll, idx::kRoll) = -1.0 / p.roll_lag;
  jac.state(idx::kPitch, idx::kPitch) = -1.0 / p.pitch_lag;

  jac.input(vx, idx::kThrust) = (sphi * spsi + cphi * cpsi * sth) / p.mass;
  jac.input(vy, idx::kThrust) = (cphi * spsi * sth - cpsi * sphi) / p.mass;
  jac.input(vz, idx::kThrust) = cphi * cth / p.mass;
  jac.input(idx::kRoll, idx::kRollCmd) = 1.0 / p.roll_lag;
  jac.input(idx::kPitch, idx::kPitchCmd) = 1.0 / p.pitch_lag;
  jac.input(idx::kYaw, idx::kYawRateCmd) = 1.0;
  return jac;
}

StateVector step_rk4(const StateVector& x, const InputVector& u, const VehicleParams& p,
                     double delta) {
  const StateVector k1 = f_continuous(x, u, p);
  const StateVector k2 = f_continuous(x + 0.5 * delta * k1, u, p);
  const StateVector k3 = f_continuous(x + 0.5 * delta * k2, u, p);
  const StateVector k4 = f_continuous(x + delta * k3, u, p);
  return x + delta / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

StateVector step_rk4_with_jacobians(const StateVector& x, const InputVector& u,
                                    const VehicleParams& p, double delta, StepJacobians& jac) {
  const StateJacobian eye = StateJacobian::Identity();

  const StateVector k1 = f_continuous(x, u, p);
  const StepJacobians j1 = continuous_jacobians(x, u, p);
  const StateJacobian k1x = j1.state;
  const InputJacobian k1u = j1.input;

  const StateVector x2 = x + 0.5 * delta * k1;
  const StateVector k2 = f_continuous(x2, u, p);
  const StepJacobians j2 = continuous_jacobians(x2, u, p);
  const StateJacobian k2x = j2.state * (eye + 0.5 * delta * k1x);
  const InputJacobian k2u = j2.state * (0.5 * delta * k1u) + j2.input;

  const StateVector x3 = x + 0.5 * delta * k2;
  const StateVector k3 = f_continuous(x3, u, p);
  const StepJacobians j3 = continuous_jacobians(x3, u, p);
  const StateJacobian k3x = j3.state * (eye + 0.5 * delta * k2x);
  const InputJacobian k3u = j3.state * (0.5 * delta * k2u) + j3.input;

  const StateVector x4 = x + delta * k3;
  const StateVector k4 = f_continuous(x4, u, p);
  const StepJacobians j4 = continuous_jacobians(x4, u, p);
  const StateJacobian k4x = j4.state * (eye + delta * k3x);
  const InputJacobian k4u = j4.state * (delta * k3u) + j4.input;

  jac.state = eye + delta / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  jac.input = delta / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  return x + delta / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

StepJacobians jacobians(const StateVector& x, const InputVector& u, const VehicleParams& p,
                        double delta) {
  StepJacobians jac;
  step_rk4_with_jacobians(x, u, p, delta, jac);
  return jac;
}

PathTimingState step_timing(PathTimingState z, double nu, double delta) {
  return {z.s + delta * z.s_dot + 0.5 * delta * delta * nu, z.s_dot + delta * nu};
}

OutputVector output(const StateVector& x) {
  OutputVector y;
  y << x(0), x(1), x(2), x(idx::kYaw);
  return y;
}

}  // namespace ellmpc
