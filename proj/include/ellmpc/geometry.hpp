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

#ifndef ELLMPC_GEOMETRY_HPP
#define ELLMPC_GEOMETRY_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ellmpc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Base class for all errors raised by the geometry routines.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape matrix is not symmetric positive semi-definite (or not finite).
class InvalidShape : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// lambda*A + (1-lambda)*B is numerically singular.
class SingularCombination : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// The Minkowski form of K needs strictly positive-definite shapes.
class DegenerateShape : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// The Minkowski form of K is undefined at lambda = 0 and lambda = 1.
class EndpointLambda : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/**
 * Ellipsoid {x : (x - c)^T P (x - c) <= 1} with a symmetric positive
 * semi-definite shape matrix P [1/m^2] and center c [m].
 *
 * The shape is symmetrized on construction. Rank-deficient shapes describe
 * unbounded sets such as infinite cylinders and are accepted; they are not
 * `strictly_pd()`.
 */
class Ellipsoid {
 public:
  Ellipsoid(const Mat3& shape, const Vec3& center);

  static Ellipsoid sphere(double radius, const Vec3& center);
  /// Axis-aligned ellipsoid with the given semi-axes.
  static Ellipsoid axis_aligned(const Vec3& semi_axes, const Vec3& center);

  const Mat3& shape() const { return shape_; }
  const Vec3& center() const { return center_; }
  bool strictly_pd() const { return strictly_pd_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

  /// Inverse of the shape matrix. Throws DegenerateShape unless strictly PD.
  const Mat3& shape_inverse() const;

  /// Same shape, new center. Skips the eigen-decomposition.
  Ellipsoid translated(const Vec3& center) const;

 private:
  Ellipsoid() = default;

  Mat3 shape_ = Mat3::Zero();
  Mat3 inverse_ = Mat3::Zero();
  Vec3 center_ = Vec3::Zero();
  double min_eigenvalue_ = 0.0;
  bool strictly_pd_ = false;
};

/// Relative eigenvalue threshold (times the trace) used for PSD / PD checks.
inline constexpr double kEigenTolerance = 1e-10;
/// Largest accepted condition number of lambda*A + (1-lambda)*B.
inline constexpr double kMaxCombinationCondition = 1e12;
/// Default half-width of the band classified as touching.
inline constexpr double kDefaultTouchTolerance = 1e-6;
/// Default bisection precision for the lambda search.
inline constexpr double kDefaultLambdaTolerance = 1e-4;

struct AuxiliaryEllipsoid {
  Mat3 e_lambda;
  Vec3 m_lambda;
  double k_value;
};

enum class Overlap { Separate, Touching, Overlapping };

std::string to_string(Overlap overlap);

struct OverlapVerdict {
  Overlap classification;
  double k_min;
  double lambda_star;
};

/// K together with its partial derivatives w.r.t. the center of `a` and lambda.
struct KSensitivity {
  double k;
  Vec3 d_center_a;
  double d_lambda;
};

bool contains(const Ellipsoid& e, const Vec3& x);

/// Auxiliary (fused) ellipsoid E_lambda, m_lambda and K(lambda).
AuxiliaryEllipsoid k_fused(double lambda, const Ellipsoid& a, const Ellipsoid& b);

/// K(lambda) = 1 - eta^T (B^-1/(1-lambda) + A^-1/lambda)^-1 eta, eta = w - v.
double k_minkowski(double lambda, const Ellipsoid& a, const Ellipsoid& b);

/// dK/dlambda. Uses the Minkowski form for strictly PD pairs and the
/// derivative of the fused form otherwise.
double dk_dlambda(double lambda, const Ellipsoid& a, const Ellipsoid& b);

/// K at lambda and its gradient w.r.t. a's center and lambda (fused form).
KSensitivity k_sensitivity(double lambda, const Ellipsoid& a, const Ellipsoid& b);

/// Minimizes K over [0, 1] by bisection on the sign of dK/dlambda.
OverlapVerdict minimize_k(const Ellipsoid& a, const Ellipsoid& b,
                          double lambda_tol = kDefaultLambdaTolerance,
                          double touch_tol = kDefaultTouchTolerance);

Overlap classify(double k, double touch_tol = kDefaultTouchTolerance);

/// Ellipsoidal outer bound of the Minkowski sum, centered at b's center.
/// a's center lies inside it iff K(lambda) >= 0.
Ellipsoid minkowski_outer(double lambda, const Ellipsoid& a, const Ellipsoid& b);

struct OracleOptions {
  int restarts = 20;
  int max_iterations = 20000;
  double intersect_slack = 1e-9;
  std::uint64_t seed = 0x5eed;
};

/**
 * Intersection test that does not use K: minimizes (x-w)^T B (x-w) over the
 * ellipsoid a by projected gradient descent from random starting points.
 * Best effort; meant for cross-checking with a margin band.
 */
bool intersects_oracle(const Ellipsoid& a, const Ellipsoid& b,
                       const OracleOptions& options = {});

/// Smallest value of (x-w)^T B (x-w) over x in a found by the oracle.
double oracle_min_quadratic(const Ellipsoid& a, const Ellipsoid& b,
                            const OracleOptions& options = {});

/// Euclidean projection of y onto the ellipsoid e (strictly PD).
Vec3 project_onto(const Ellipsoid& e, const Vec3& y);

}  // namespace ellmpc

#endif  // ELLMPC_GEOMETRY_HPP
