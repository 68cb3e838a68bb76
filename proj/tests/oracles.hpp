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

// Reference computations for the tests. Nothing here calls into the library
// except for the plain data types, so the checks stay independent.

#ifndef ELLMPC_TESTS_ORACLES_HPP
#define ELLMPC_TESTS_ORACLES_HPP

#include "ellmpc/dynamics.hpp"
#include "ellmpc/geometry.hpp"
#include "ellmpc/qp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace ellmpc::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Mat3 random_rotation(Rng& rng) {
  std::normal_distribution<double> gauss;
  Mat3 g;
  for (int i = 0; i < 9; ++i) g(i) = gauss(rng);
  Eigen::HouseholderQR<Mat3> qr(g);
  return qr.householderQ();
}

/// Random SPD shape with semi-axes in [axis_lo, axis_hi].
inline Mat3 random_shape(Rng& rng, double axis_lo = 0.2, double axis_hi = 2.0) {
  const Mat3 r = random_rotation(rng);
  Vec3 d;
  for (int i = 0; i < 3; ++i) {
    const double a = uniform(rng, axis_lo, axis_hi);
    d(i) = 1.0 / (a * a);
  }
  Mat3 s = r * d.asDiagonal() * r.transpose();
  return 0.5 * (s + s.transpose());
}

inline Vec3 random_vec(Rng& rng, double lo, double hi) {
  return Vec3(uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi));
}

/// min_x lambda q_A(x) + (1 - lambda) q_B(x), subtracted from 1, by direct minimization.
inline double k_direct(double lambda, const Mat3& a, const Vec3& v, const Mat3& b, const Vec3& w) {
  const Mat3 e = lambda * a + (1.0 - lambda) * b;
  const Vec3 rhs = lambda * a * v + (1.0 - lambda) * b * w;
  const Vec3 x = e.ldlt().solve(rhs);
  const double value = lambda * (x - v).dot(a * (x - v)) + (1.0 - lambda) * (x - w).dot(b * (x - w));
  return 1.0 - value;
}

/// Ball pair closed form: k_min and the minimizing lambda.
struct SphereClosedForm {
  double k_min;
  double lambda_star;
};

inline SphereClosedForm sphere_closed_form(double r_a, double r_b, double distance) {
  const double sum = r_a + r_b;
  return {1.0 - distance * distance / (sum * sum), r_a / sum};
}

/// Grid search of K over lambda in [0, 1] with `points` samples.
template <typename F>
double grid_argmin(F&& k_of_lambda, int points = 10000) {
  double best = std::numeric_limits<double>::infinity();
  double arg = 0.0;
  for (int i = 0; i < points; ++i) {
    const double lambda = static_cast<double>(i) / (points - 1);
    const double k = k_of_lambda(lambda);
    if (k < best) {
      best = k;
      arg = lambda;
    }
  }
  return arg;
}

/// Quadrotor vector field written from the body-z axis of R = Rz(psi) Ry(theta) Rx(phi).
inline StateVector quad_field(const StateVector& x, const InputVector& u, const VehicleParams& p) {
  const Eigen::Matrix3d r = (Eigen::AngleAxisd(x(8), Eigen::Vector3d::UnitZ()) *
                             Eigen::AngleAxisd(x(7), Eigen::Vector3d::UnitY()) *
                             Eigen::AngleAxisd(x(6), Eigen::Vector3d::UnitX()))
                                .toRotationMatrix();
  const double specific_thrust = u(0) / p.mass + p.gravity;
  StateVector dx;
  dx.segment<3>(0) = x.segment<3>(3);
  dx.segment<3>(3) = r.col(2) * specific_thrust - Eigen::Vector3d(0, 0, p.gravity);
  dx(6) = (u(1) - x(6)) / p.roll_lag;
  dx(7) = (u(2) - x(7)) / p.pitch_lag;
  dx(8) = u(3);
  return dx;
}

/// Integrates the field with `substeps` classical RK4 steps.
inline StateVector quad_fine(StateVector x, const InputVector& u, const VehicleParams& p,
                             double delta, int substeps = 2000) {
  const double h = delta / substeps;
  for (int i = 0; i < substeps; ++i) {
    const StateVector k1 = quad_field(x, u, p);
    const StateVector k2 = quad_field(x + 0.5 * h * k1, u, p);
    const StateVector k3 = quad_field(x + 0.5 * h * k2, u, p);
    const StateVector k4 = quad_field(x + h * k3, u, p);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

/**
 * Solves a small strictly convex QP by enumerating every active set of the
 * one-sided inequality form G x <= h (bounds and rows expanded), keeping the
 * KKT points that are primal and dual feasible. Equal-sided rows are always
 * active. Returns nothing when no KKT point exists.
 */
inline std::optional<Eigen::VectorXd> enumerate_qp(const QpProblem& qp, double tol = 1e-9) {
  const Eigen::Index n = qp.num_variables();
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  std::vector<bool> equality;
  auto add = [&](const Eigen::VectorXd& g, double h, bool eq) {
    rows.push_back(g);
    rhs.push_back(h);
    equality.push_back(eq);
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = 1.0;
    if (std::isfinite(qp.upper(i))) add(e, qp.upper(i), false);
    if (std::isfinite(qp.lower(i))) add(-e, -qp.lower(i), false);
  }
  for (Eigen::Index r = 0; r < qp.num_constraints(); ++r) {
    const Eigen::VectorXd c = qp.constraints.row(r).transpose();
    const double lo = qp.constraint_lower(r);
    const double hi = qp.constraint_upper(r);
    if (lo == hi) {
      add(c, hi, true);
      continue;
    }
    if (std::isfinite(hi)) add(c, hi, false);
    if (std::isfinite(lo)) add(-c, -lo, false);
  }
  const std::size_t m = rows.size();
  std::optional<Eigen::VectorXd> best;
  double best_obj = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    bool skip = false;
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < m; ++i) {
      const bool in = (mask >> i) & 1U;
      if (equality[i] && !in) skip = true;
      if (in) active.push_back(i);
    }
    if (skip || static_cast<Eigen::Index>(active.size()) > n) continue;
    const Eigen::Index k = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
    Eigen::VectorXd b(n + k);
    kkt.topLeftCorner(n, n) = qp.hessian;
    b.head(n) = -qp.gradient;
    for (Eigen::Index j = 0; j < k; ++j) {
      kkt.block(0, n + j, n, 1) = rows[active[j]];
      kkt.block(n + j, 0, 1, n) = rows[active[j]].transpose();
      b(n + j) = rhs[active[j]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (lu.rank() < n + k) continue;
    const Eigen::VectorXd sol = lu.solve(b);
    const Eigen::VectorXd x = sol.head(n);
    bool ok = true;
    for (Eigen::Index j = 0; j < k && ok; ++j) {
      if (!equality[active[j]] && sol(n + j) < -tol) ok = false;
    }
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (rows[i].dot(x) > rhs[i] + tol * (1.0 + std::abs(rhs[i]))) ok = false;
    }
    if (!ok) continue;
    const double obj = 0.5 * x.dot(qp.hessian * x) + qp.gradient.dot(x);
    if (obj < best_obj) {
      best_obj = obj;
      best = x;
    }
  }
  return best;
}

/// Random feasible QP with n variables, some bounds and `rows` general rows.
inline QpProblem random_qp(Rng& rng, int n, int rows) {
  std::normal_distribution<double> gauss;
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd l(n, n);
  for (int i = 0; i < n * n; ++i) l(i) = gauss(rng);
  QpProblem qp;
  qp.hessian = l * l.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
  qp.gradient = Eigen::VectorXd(n);
  for (int i = 0; i < n; ++i) qp.gradient(i) = 3.0 * gauss(rng);
  Eigen::VectorXd feasible(n);
  for (int i = 0; i < n; ++i) feasible(i) = 0.5 * gauss(rng);
  qp.lower = Eigen::VectorXd::Constant(n, -inf);
  qp.upper = Eigen::VectorXd::Constant(n, inf);
  for (int i = 0; i < n; ++i) {
    const double pick = uniform(rng, 0.0, 1.0);
    if (pick < 0.3) qp.lower(i) = feasible(i) - uniform(rng, 0.0, 0.5);
    if (pick > 0.5) qp.upper(i) = feasible(i) + uniform(rng, 0.0, 0.5);
    if (pick > 0.8) qp.lower(i) = feasible(i) - uniform(rng, 0.0, 0.5);
  }
  qp.constraints = Eigen::MatrixXd(rows, n);
  qp.constraint_lower = Eigen::VectorXd::Constant(rows, -inf);
  qp.constraint_upper = Eigen::VectorXd::Constant(rows, inf);
  for (int r = 0; r < rows; ++r) {
    for (int i = 0; i < n; ++i) qp.constraints(r, i) = gauss(rng);
    const double value = qp.constraints.row(r).dot(feasible);
    const double pick = uniform(rng, 0.0, 1.0);
    if (pick < 0.1) {
      qp.constraint_lower(r) = qp.constraint_upper(r) = value;
    } else if (pick < 0.5) {
      qp.constraint_upper(r) = value + uniform(rng, 0.0, 0.5);
    } else if (pick < 0.8) {
      qp.constraint_lower(r) = value - uniform(rng, 0.0, 0.5);
    } else {
      qp.constraint_lower(r) = value - uniform(rng, 0.0, 0.5);
      qp.constraint_upper(r) = value + uniform(rng, 0.0, 0.5);
    }
  }
  return qp;
}

}  // namespace ellmpc::testing

#endif  // ELLMPC_TESTS_ORACLES_HPP
