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

#include "ellmpc/path.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ellmpc {

namespace {

struct SplineDeleter {
  void operator()(gsl_spline* spline) const { gsl_spline_free(spline); }
};
using SplinePtr = std::shared_ptr<gsl_spline>;

}  // namespace

Path::Path(std::string name, double s0, Evaluator evaluator)
    : name_(std::move(name)), s0_(s0), evaluator_(std::move(evaluator)) {
  if (!(s0_ < 0.0) || !std::isfinite(s0_)) {
    throw std::invalid_argument("path start s0 must be finite and negative");
  }
  if (!evaluator_) throw std::invalid_argument("path evaluator is empty");
}

Path Path::demo() {
  return Path("demo", -1.0, [](double s) {
    const double c = std::numbers::sqrt2 / 2.0;
    const double e = std::exp(-(6.0 * s + 5.8));
    const double q = 2.25 * s + 2.175;
    const double bump = e * q;
    const double dbump = e * (2.25 - 6.0 * q);
    const double along = 0.75 * s + 0.5;

    const double g = -(4.0 / 30.0) * (135.0 * s + 108.0) * e;
    const double dg = -(4.0 / 30.0) * e * (135.0 - 6.0 * (135.0 * s + 108.0));

    PathSample out;
    out.value << c * (along - bump), c * (along + bump), 0.5,
        std::atan(g) + std::numbers::pi / 4.0;
    out.derivative << c * (0.75 - dbump), c * (0.75 + dbump), 0.0, dg / (1.0 + g * g);
    return out;
  });
}

Path Path::straight_line(const OutputVector& start, const OutputVector& end, double s0) {
  const OutputVector slope = (end - start) / (-s0);
  return Path("straight_line", s0, [start, slope, s0](double s) {
    return PathSample{start + (s - s0) * slope, slope};
  });
}

Path Path::from_waypoints(const std::vector<double>& s_samples,
                          const std::vector<OutputVector>& points) {
  if (s_samples.size() < 2 || s_samples.size() != points.size()) {
    throw std::invalid_argument("waypoint path needs at least two samples and one point per sample");
  }
  for (std::size_t i = 1; i < s_samples.size(); ++i) {
    if (!(s_samples[i] > s_samples[i - 1])) {
      throw std::invalid_argument("s_samples must be strictly increasing");
    }
  }
  if (s_samples.back() != 0.0) throw std::invalid_argument("s_samples must end at 0");

  gsl_set_error_handler_off();
  const gsl_interp_type* type = s_samples.size() >= 3 ? gsl_interp_cspline : gsl_interp_linear;
  std::array<SplinePtr, kOutputDim> splines;
  std::vector<double> column(points.size());
  for (int d = 0; d < kOutputDim; ++d) {
    for (std::size_t i = 0; i < points.size(); ++i) column[i] = points[i](d);
    splines[d] = SplinePtr(gsl_spline_alloc(type, s_samples.size()), SplineDeleter{});
    if (!splines[d] ||
        gsl_spline_init(splines[d].get(), s_samples.data(), column.data(), s_samples.size()) !=
            GSL_SUCCESS) {
      throw std::runtime_error("spline construction failed");
    }
  }

  Path path("waypoints", s_samples.front(), [splines](double s) {
    PathSample out;
    for (int d = 0; d < kOutputDim; ++d) {
      // A null accelerator keeps evaluation safe for concurrent readers.
      out.value(d) = gsl_spline_eval(splines[d].get(), s, nullptr);
      out.derivative(d) = gsl_spline_eval_deriv(splines[d].get(), s, nullptr);
    }
    return out;
  });
  path.waypoint_s_ = s_samples;
  path.waypoints_ = points;
  return path;
}

OutputVector Path::eval(double s) const { return eval_with_derivative(s).value; }

PathSample Path::eval_with_derivative(double s) const {
  if (s < s0_) {
    PathSample out = evaluator_(s0_);
    out.derivative.setZero();
    return out;
  }
  if (s > 0.0) {
    PathSample out = evaluator_(0.0);
    out.derivative.setZero();
    return out;
  }
  return evaluator_(s);
}

double Path::distance_to(const Eigen::Vector3d& position, int coarse_samples) const {
  auto dist = [&](double s) { return (eval(s).head<3>() - position).norm(); };
  const int n = std::max(coarse_samples, 2);
  double best_s = s0_;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double s = s0_ + (-s0_) * i / n;
    const double d = dist(s);
    if (d < best) {
      best = d;
      best_s = s;
    }
  }
  // Golden-section refinement within the neighbouring cells.
  const double h = -s0_ / n;
  double lo = std::max(s0_, best_s - h);
  double hi = std::min(0.0, best_s + h);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - ratio * (hi - lo);
  double d = lo + ratio * (hi - lo);
  double fc = dist(c), fd = dist(d);
  for (int it = 0; it < 60; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = dist(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = dist(d);
    }
  }
  return std::min(best, std::min(fc, fd));
}

}  // namespace ellmpc
