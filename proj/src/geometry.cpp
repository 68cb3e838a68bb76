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

#include "ellmpc/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace ellmpc {

namespace {

void require_interior(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    std::ostringstream os;
    os << "lambda = " << lambda << " is outside the open interval (0, 1)";
    throw EndpointLambda(os.str());
  }
}

void require_strictly_pd(const Ellipsoid& a, const Ellipsoid& b) {
  if (!a.strictly_pd() || !b.strictly_pd()) {
    throw DegenerateShape("Minkowski form of K needs strictly positive-definite shapes");
  }
}

// (B^-1/(1-lambda) + A^-1/lambda)
Mat3 minkowski_sum_inverse_shape(double lambda, const Ellipsoid& a, const Ellipsoid& b) {
  return b.shape_inverse() / (1.0 - lambda) + a.shape_inverse() / lambda;
}

// Fused-form quantities in coordinates centered at a's center.
struct FusedLocal {
  Mat3 e;
  Vec3 m;       // m_lambda - v
  Vec3 b_rhs;   // (1-lambda) B (w - v)
  double c;     // (w-v)^T B (w-v)
  double k;
};

FusedLocal fused_local(double lambda, const Ellipsoid& a, const Ellipsoid& b) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    std::ostringstream os;
    os << "lambda = " << lambda << " is outside [0, 1]";
    throw std::invalid_argument(os.str());
  }
  FusedLocal out;
  out.e = lambda * a.shape() + (1.0 - lambda) * b.shape();

  Eigen::SelfAdjointEigenSolver<Mat3> eig;
  eig.computeDirect(out.e, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(2);
  if (!(lo > 0.0) || hi / lo > kMaxCombinationCondition) {
    std::ostringstream os;
    os << "lambda*A + (1-lambda)*B is singular at lambda = " << lambda;
    throw SingularCombination(os.str());
  }

  const Vec3 eta = b.center() - a.center();
  const Vec3 b_eta = b.shape() * eta;
  out.c = eta.dot(b_eta);
  out.b_rhs = (1.0 - lambda) * b_eta;
  out.m = out.e.llt().solve(out.b_rhs);
  out.k = 1.0 - (1.0 - lambda) * out.c + out.b_rhs.dot(out.m);
  return out;
}

}  // namespace

std::string to_string(Overlap overlap) {
  switch (overlap) {
    case Overlap::Separate:
      return "Separate";
    case Overlap::Touching:
      return "Touching";
    case Overlap::Overlapping:
      return "Overlapping";
  }
  return "Unknown";
}

Ellipsoid::Ellipsoid(const Mat3& shape, const Vec3& center) : center_(center) {
  if (!shape.allFinite() || !center.allFinite()) {
    throw InvalidShape("ellipsoid shape and center must be finite");
  }
  shape_ = 0.5 * (shape + shape.transpose());

  Eigen::SelfAdjointEigenSolver<Mat3> eig(shape_, Eigen::EigenvaluesOnly);
  min_eigenvalue_ = eig.eigenvalues()(0);
  const double scale = kEigenTolerance * std::abs(shape_.trace());
  if (min_eigenvalue_ < -scale) {
    std::ostringstream os;
    os << "shape matrix is not positive semi-definite (smallest eigenvalue " << min_eigenvalue_
       << ")";
    throw InvalidShape(os.str());
  }
  strictly_pd_ = min_eigenvalue_ > scale;
  if (strictly_pd_) {
    inverse_ = shape_.inverse();
    inverse_ = 0.5 * (inverse_ + inverse_.transpose()).eval();
  }
}

Ellipsoid Ellipsoid::sphere(double radius, const Vec3& center) {
  if (!(radius > 0.0)) {
    throw InvalidShape("sphere radius must be positive");
  }
  return Ellipsoid(Mat3::Identity() / (radius * radius), center);
}

Ellipsoid Ellipsoid::axis_aligned(const Vec3& semi_axes, const Vec3& center) {
  if (!(semi_axes.array() > 0.0).all()) {
    throw InvalidShape("semi-axes must be positive");
  }
  return Ellipsoid(semi_axes.array().square().inverse().matrix().asDiagonal(), center);
}

const Mat3& Ellipsoid::shape_inverse() const {
  if (!strictly_pd_) {
    throw DegenerateShape("shape matrix is not strictly positive definite");
  }
  return inverse_;
}

Ellipsoid Ellipsoid::translated(const Vec3& center) const {
  if (!center.allFinite()) {
    throw InvalidShape("ellipsoid center must be finite");
  }
  Ellipsoid out = *this;
  out.center_ = center;
  return out;
}

bool contains(const Ellipsoid& e, const Vec3& x) {
  const Vec3 d = x - e.center();
  return d.dot(e.shape() * d) <= 1.0;
}

AuxiliaryEllipsoid k_fused(double lambda, const Ellipsoid& a, const Ellipsoid& b) {
  const FusedLocal local = fused_local(lambda, a, b);
  return {local.e, a.center() + local.m, local.k};
}

double k_minkowski(double lambda, const Ellipsoid& a, const Ellipsoid& b) {
  require_strictly_pd(a, b);
  require_interior(lambda);
  const Vec3 eta = b.center() - a.center();
  const Mat3 s = minkowski_sum_inverse_shape(lambda, a, b);
  return 1.0 - eta.dot(s.llt().solve(eta));
}

double dk_dlambda(double lambda, const Ellipsoid& a, const Ellipsoid& b) {
  if (a.strictly_pd() && b.strictly_pd()) {
    require_interior(lambda);
    const Vec3 eta = b.center() - a.center();
    const Mat3 s = minkowski_sum_inverse_shape(lambda, a, b);
    const Vec3 s_eta = s.llt().solve(eta);
    const double one_minus = 1.0 - lambda;
    const Mat3 ds = b.shape_inverse() / (one_minus * one_minus) -
                    a.shape_inverse() / (lambda * lambda);
    return s_eta.dot(ds * s_eta);
  }
  return k_sensitivity(lambda, a, b).d_lambda;
}

KSensitivity k_sensitivity(double lambda, const Ellipsoid& a, const Ellipsoid& b) {
  const FusedLocal local = fused_local(lambda, a, b);
  const Vec3 db = -(b.shape() * (b.center() - a.center()));
  const Mat3 de = a.shape() - b.shape();
  KSensitivity out;
  out.k = local.k;
  out.d_center_a = 2.0 * lambda * (a.shape() * local.m);
  out.d_lambda = local.c + 2.0 * db.dot(local.m) - local.m.dot(de * local.m);
  return out;
}

Overlap classify(double k, double touch_tol) {
  if (k < -touch_tol) return Overlap::Separate;
  if (k > touch_tol) return Overlap::Overlapping;
  return Overlap::Touching;
}

OverlapVerdict minimize_k(const Ellipsoid& a, const Ellipsoid& b, double lambda_tol,
                          double touch_tol) {
  if (!(lambda_tol > 0.0 && lambda_tol < 0.5)) {
    throw std::invalid_argument("lambda_tol must lie in (0, 0.5)");
  }
  // E_lambda is singular only at the endpoint belonging to a degenerate shape.
  double lo = lambda_tol;
  double hi = 1.0 - lambda_tol;
  if (a.strictly_pd() && !b.strictly_pd()) hi = 1.0;
  if (!a.strictly_pd() && b.strictly_pd()) lo = 0.0;

  double lambda_star;
  if (dk_dlambda(lo, a, b) >= 0.0) {
    lambda_star = lo;
  } else if (dk_dlambda(hi, a, b) <= 0.0) {
    lambda_star = hi;
  } else {
    while (hi - lo > lambda_tol) {
      const double mid = 0.5 * (lo + hi);
      if (dk_dlambda(mid, a, b) > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    lambda_star = 0.5 * (lo + hi);
  }
  const double k_min = k_fused(lambda_star, a, b).k_value;
  return {classify(k_min, touch_tol), k_min, lambda_star};
}

Ellipsoid minkowski_outer(double lambda, const Ellipsoid& a, const Ellipsoid& b) {
  require_strictly_pd(a, b);
  require_interior(lambda);
  return Ellipsoid(minkowski_sum_inverse_shape(lambda, a, b).inverse(), b.center());
}

}  // namespace ellmpc
