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

#ifndef ELLMPC_GEOMETRY_BATCH_HPP
#define ELLMPC_GEOMETRY_BATCH_HPP

#include "ellmpc/geometry.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ellmpc {

// Data-parallel kernels over independent ellipsoid pairs. Every kernel has a
// serial reference and an OpenMP variant that must agree bit for bit.

enum class Execution { Serial, Parallel };

/// Below this many items the parallel variants run serially.
inline constexpr std::size_t kParallelThreshold = 32;

std::vector<OverlapVerdict> minimize_k_batch(std::span<const Ellipsoid> robots,
                                             std::span<const Ellipsoid> obstacles,
                                             Execution execution,
                                             double lambda_tol = kDefaultLambdaTolerance,
                                             double touch_tol = kDefaultTouchTolerance);

/// K(lambda_i) for pair i, fused and Minkowski forms side by side.
struct KPairValues {
  double fused;
  double minkowski;
};

std::vector<KPairValues> k_both_forms_batch(std::span<const double> lambdas,
                                            std::span<const Ellipsoid> robots,
                                            std::span<const Ellipsoid> obstacles,
                                            Execution execution);

std::vector<std::uint8_t> intersects_oracle_batch(std::span<const Ellipsoid> robots,
                                                  std::span<const Ellipsoid> obstacles,
                                                  Execution execution,
                                                  const OracleOptions& options = {});

}  // namespace ellmpc

#endif  // ELLMPC_GEOMETRY_BATCH_HPP
