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

// Serial reference vs OpenMP variants of the batch kernels.

#include "ellmpc/geometry_batch.hpp"
#include "ellmpc/simulator.hpp"

#include <benchmark/benchmark.h>

#include <Eigen/Geometry>

#include <cmath>
#include <map>
#include <random>

namespace {

using ellmpc::Ellipsoid;
using ellmpc::Execution;

struct Pairs {
  std::vector<Ellipsoid> robots;
  std::vector<Ellipsoid> obstacles;
  std::vector<double> lambdas;
};

Ellipsoid random_ellipsoid(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> axis(0.2, 2.0);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::normal_distribution<double> gauss;
  const Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  const Eigen::Matrix3d r = q.normalized().toRotationMatrix();
  const Eigen::Vector3d d(1 / std::pow(axis(rng), 2), 1 / std::pow(axis(rng), 2),
                          1 / std::pow(axis(rng), 2));
  return Ellipsoid(r * d.asDiagonal() * r.transpose(), Eigen::Vector3d(pos(rng), pos(rng), pos(rng)));
}

const Pairs& pairs(std::size_t n) {
  static std::map<std::size_t, Pairs> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> lam(0.05, 0.95);
  Pairs p;
  for (std::size_t i = 0; i < n; ++i) {
    p.robots.push_back(random_ellipsoid(rng));
    p.obstacles.push_back(random_ellipsoid(rng));
    p.lambdas.push_back(lam(rng));
  }
  return cache.emplace(n, std::move(p)).first->second;
}

Execution execution_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(1) == 0 ? "serial" : "parallel");
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MinimizeK(benchmark::State& state) {
  const Pairs& p = pairs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ellmpc::minimize_k_batch(p.robots, p.obstacles, execution_of(state)));
  }
  label(state);
}

void BM_KBothForms(benchmark::State& state) {
  const Pairs& p = pairs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ellmpc::k_both_forms_batch(p.lambdas, p.robots, p.obstacles, execution_of(state)));
  }
  label(state);
}

void BM_Oracle(benchmark::State& state) {
  const Pairs& p = pairs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ellmpc::intersects_oracle_batch(p.robots, p.obstacles, execution_of(state)));
  }
  label(state);
}

void BM_ScenarioBatch(benchmark::State& state) {
  std::vector<ellmpc::Scenario> runs;
  for (int i = 0; i < state.range(0); ++i) {
    ellmpc::Scenario sc = ellmpc::builtin_scenario("demo-static");
    sc.duration = 0.5;
    sc.controller.mode = ellmpc::ControllerMode::FixedLambda;
    sc.controller.fixed_lambda = 0.3 + 0.4 * i / std::max<double>(1.0, state.range(0) - 1.0);
    runs.push_back(sc);
  }
  for (auto _ : state) benchmark::DoNotOptimize(ellmpc::run_batch(runs, execution_of(state)));
  label(state);
}

BENCHMARK(BM_MinimizeK)->ArgsProduct({{256, 4096}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KBothForms)->ArgsProduct({{4096, 65536}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Oracle)->ArgsProduct({{256, 2048}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScenarioBatch)->ArgsProduct({{4}, {0, 1}})->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
