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

// Intersection oracle that never evaluates K: a plain projected-gradient
// minimization of the obstacle's quadratic form over the robot ellipsoid.

#include "ellmpc/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ellmpc {

namespace {

class Projector {
 public:
  explicit Projector(const Ellipsoid& e) : center_(e.center()) {
    if (!e.strictly_pd()) {
      throw DegenerateShape("projection needs a strictly positive-definite ellipsoid");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(e.shape());
    basis_ = eig.eigenvectors();
    eigenvalues_ = eig.eigenvalues();
  }

  Vec3 project(const Vec3& y) const {
    const Vec3 z = basis_.transpose() * (y - center_);
    const Vec3 weighted = eigenvalues_.cwiseProduct(z.cwiseProduct(z));
    if (weighted.sum() <= 1.0) return y;

    // g(mu) = sum l_i z_i^2 / (1 + mu l_i)^2 - 1 is convex and decreasing, so
    // Newton from mu = 0 approaches the root monotonically from the left.
    double mu = 0.0;
    for (int it = 0; it < 200; ++it) {
      double g = -1.0;
      double dg = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double denom = 1.0 + mu * eigenvalues_(i);
        g += weighted(i) / (denom * denom);
        dg -= 2.0 * eigenvalues_(i) * weighted(i) / (denom * denom * denom);
      }
      if (g <= 1e-15 || dg == 0.0) break;
      const double step = g / dg;
      mu -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, mu)) break;
    }
    Vec3 local;
    for (int i = 0; i < 3; ++i) local(i) = z(i) / (1.0 + mu * eigenvalues_(i));
    return center_ + basis_ * local;
  }

  // Point of the ellipsoid from a point of the unit ball.
  Vec3 from_unit_ball(const Vec3& u) const {
    return center_ + basis_ * eigenvalues_.cwiseSqrt().cwiseInverse().cwiseProduct(u);
  }

 private:
  Vec3 center_;
  Mat3 basis_;
  Vec3 eigenvalues_;
};

Vec3 random_in_unit_ball(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Vec3 g(normal(rng), normal(rng), normal(rng));
  const double n = g.norm();
  if (n == 0.0) return Vec3::Zero();
  return g / n * std::cbrt(uniform(rng));
}

}  // namespace

Vec3 project_onto(const Ellipsoid& e, const Vec3& y) { return Projector(e).project(y); }

double oracle_min_quadratic(const Ellipsoid& a, const Ellipsoid& b,
                            const OracleOptions& options) {
  if (!a.strictly_pd() || !b.strictly_pd()) {
    throw DegenerateShape("intersection oracle needs strictly positive-definite shapes");
  }
  const Projector projector(a);
  const Mat3& shape_b = b.shape();
  const Vec3& w = b.center();
  Eigen::SelfAdjointEigenSolver<Mat3> eig(shape_b, Eigen::EigenvaluesOnly);
  const double lipschitz = 2.0 * eig.eigenvalues()(2);
  const double target = 1.0 + options.intersect_slack;

  auto objective = [&](const Vec3& x) {
    const Vec3 d = x - w;
    return d.dot(shape_b * d);
  };

  std::mt19937_64 rng(options.seed);
  double best = std::numeric_limits<double>::infinity();
  const int restarts = std::max(1, options.restarts);
  for (int r = 0; r < restarts; ++r) {
    Vec3 x = r == 0 ? projector.project(w) : projector.from_unit_ball(random_in_unit_ball(rng));
    double fx = objective(x);
    for (int it = 0; it < options.max_iterations && fx > target; ++it) {
      const Vec3 grad = 2.0 * (shape_b * (x - w));
      const Vec3 next = projector.project(x - grad / lipschitz);
      const double step = (next - x).norm();
      x = next;
      fx = objective(x);
      if (step <= 1e-15 * (1.0 + x.norm())) break;
    }
    best = std::min(best, fx);
    if (best <= target) break;
  }
  return best;
}

bool intersects_oracle(const Ellipsoid& a, const Ellipsoid& b, const OracleOptions& options) {
  return oracle_min_quadratic(a, b, options) <= 1.0 + options.intersect_slack;
}

}  // namespace ellmpc
