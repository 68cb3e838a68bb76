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

#include "ellmpc/geometry_batch.hpp"

#include <exception>
#include <stdexcept>

namespace ellmpc {

namespace {

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("batch inputs must have equal length");
}

// Runs body(i) for i in [0, n). Exceptions thrown inside the parallel region
// are captured and the first one is rethrown on the calling thread.
template <typename Body>
void for_each_index(std::size_t n, Execution execution, Body&& body) {
  if (execution == Execution::Serial || n < kParallelThreshold) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(ellmpc_batch_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<OverlapVerdict> minimize_k_batch(std::span<const Ellipsoid> robots,
                                             std::span<const Ellipsoid> obstacles,
                                             Execution execution, double lambda_tol,
                                             double touch_tol) {
  require_same_size(robots.size(), obstacles.size());
  std::vector<OverlapVerdict> out(robots.size());
  for_each_index(robots.size(), execution, [&](std::size_t i) {
    out[i] = minimize_k(robots[i], obstacles[i], lambda_tol, touch_tol);
  });
  return out;
}

std::vector<KPairValues> k_both_forms_batch(std::span<const double> lambdas,
                                            std::span<const Ellipsoid> robots,
                                            std::span<const Ellipsoid> obstacles,
                                            Execution execution) {
  require_same_size(robots.size(), obstacles.size());
  require_same_size(robots.size(), lambdas.size());
  std::vector<KPairValues> out(robots.size());
  for_each_index(robots.size(), execution, [&](std::size_t i) {
    out[i] = {k_fused(lambdas[i], robots[i], obstacles[i]).k_value,
              k_minkowski(lambdas[i], robots[i], obstacles[i])};
  });
  return out;
}

std::vector<std::uint8_t> intersects_oracle_batch(std::span<const Ellipsoid> robots,
                                                  std::span<const Ellipsoid> obstacles,
                                                  Execution execution,
                                                  const OracleOptions& options) {
  require_same_size(robots.size(), obstacles.size());
  std::vector<std::uint8_t> out(robots.size());
  for_each_index(robots.size(), execution, [&](std::size_t i) {
    OracleOptions local = options;
    local.seed = options.seed + i;
    out[i] = intersects_oracle(robots[i], obstacles[i], local) ? 1 : 0;
  });
  return out;
}

}  // namespace ellmpc
