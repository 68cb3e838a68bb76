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

#ifndef ELLMPC_PATH_HPP
#define ELLMPC_PATH_HPP

#include "ellmpc/dynamics.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace ellmpc {

/// Point on the path and its derivative w.r.t. the path parameter.
struct PathSample {
  OutputVector value;
  OutputVector derivative;
};

/**
 * Geometric path p(s) = (x, y, z, yaw) on s in [s0, 0].
 *
 * Arguments outside the interval are clamped; the derivative reported there
 * is zero, matching the clamped (constant) extension.
 */
class Path {
 public:
  using Evaluator = std::function<PathSample(double)>;

  Path(std::string name, double s0, Evaluator evaluator);

  /// Built-in demonstration path with s0 = -1 and constant altitude 0.5 m.
  static Path demo();
  /// p(s) = start + (s - s0) / (-s0) * (end - start).
  static Path straight_line(const OutputVector& start, const OutputVector& end, double s0 = -1.0);
  /// C^2 cubic spline through waypoints; s_samples strictly increasing and ending at 0.
  static Path from_waypoints(const std::vector<double>& s_samples,
                             const std::vector<OutputVector>& points);

  OutputVector eval(double s) const;
  PathSample eval_with_derivative(double s) const;

  double s0() const { return s0_; }
  const std::string& name() const { return name_; }

  /// Waypoints the path was built from (empty for analytic paths).
  const std::vector<double>& waypoint_s() const { return waypoint_s_; }
  const std::vector<OutputVector>& waypoints() const { return waypoints_; }

  /// Smallest Euclidean distance from `position` to the xyz part of the path.
  double distance_to(const Eigen::Vector3d& position, int coarse_samples = 400) const;

 private:
  std::string name_;
  double s0_;
  Evaluator evaluator_;
  std::vector<double> waypoint_s_;
  std::vector<OutputVector> waypoints_;
};

}  // namespace ellmpc

#endif  // ELLMPC_PATH_HPP
