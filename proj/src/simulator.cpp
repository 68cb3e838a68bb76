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

#include "ellmpc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <random>
#include <stdexcept>

namespace ellmpc {

namespace {

constexpr int kPlantSubsteps = 10;

// Position noise plus moving-average finite-difference velocity.
class Measurement {
 public:
  Measurement(const NoiseSettings& noise, double delta, std::uint64_t seed)
      : noise_(noise), delta_(delta), rng_(seed) {}

  StateVector sample(const StateVector& truth) {
    if (noise_.position_std <= 0.0) return truth;
    StateVector measured = truth;
    std::normal_distribution<double> gauss(0.0, noise_.position_std);
    for (int i = 0; i < 3; ++i) measured(idx::kPos + i) += gauss(rng_);
    history_.push_back(position_of(measured));
    if (static_cast<int>(history_.size()) > noise_.velocity_window) history_.pop_front();
    if (history_.size() >= 2) {
      // Mean of consecutive differences telescopes to end-point difference.
      const double span = delta_ * static_cast<double>(history_.size() - 1);
      measured.segment<3>(idx::kVel) = (history_.back() - history_.front()) / span;
    }
    return measured;
  }

 private:
  NoiseSettings noise_;
  double delta_;
  std::mt19937_64 rng_;
  std::deque<Vec3> history_;
};

StateVector propagate_plant(const StateVector& x, const InputVector& u, const VehicleParams& plant,
                            double delta) {
  StateVector next = x;
  const double h = delta / kPlantSubsteps;
  for (int i = 0; i < kPlantSubsteps; ++i) next = step_rk4(next, u, plant, h);
  return next;
}

}  // namespace

void Scenario::validate() const {
  vehicle.validate();
  config.validate();
  controller.validate();
  if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
  if (!Ellipsoid(robot_shape, Vec3::Zero()).strictly_pd()) {
    throw std::invalid_argument("robot shape must be strictly positive definite");
  }
  if (!(z0.s >= path.s0() && z0.s <= 0.0)) throw std::invalid_argument("z0.s must lie in [s0, 0]");
  if (!(z0.s_dot >= config.s_dot_floor && z0.s_dot <= config.s_dot_max)) {
    throw std::invalid_argument("z0.s_dot must lie in [s_dot_floor, s_dot_max]");
  }
  if (!(noise.position_std >= 0.0)) throw std::invalid_argument("noise std must be nonnegative");
  if (noise.velocity_window < 2) throw std::invalid_argument("velocity window must be >= 2");
  if (!(mass_perturbation_pct > -100.0)) {
    throw std::invalid_argument("mass perturbation must exceed -100 percent");
  }
}

int Scenario::num_samples() const {
  return static_cast<int>(std::lround(duration / config.delta)) + 1;
}

SimLog run(const Scenario& scenario) { return run(scenario, scenario.controller); }

SimLog run(const Scenario& scenario, const ControllerSettings& settings) {
  scenario.validate();
  const double delta = scenario.config.delta;
  Controller controller(OcpModel{scenario.config, scenario.path, scenario.vehicle,
                                 scenario.robot_shape},
                        settings);
  VehicleParams plant = scenario.vehicle;
  plant.mass *= 1.0 + scenario.mass_perturbation_pct / 100.0;
  Measurement sensor(scenario.noise, delta, scenario.seed);
  const Ellipsoid robot(scenario.robot_shape, Vec3::Zero());

  SimLog log;
  const int count = scenario.num_samples();
  log.samples.reserve(count);
  StateVector x = scenario.x0;
  PathTimingState z = scenario.z0;
  int infeasible_run = 0;
  for (int i = 0; i < count; ++i) {
    const double t = i * delta;
    const StateVector measured = sensor.sample(x);
    const ControlResult result = controller.step(measured, z, scenario.obstacles, t);
    const StepDiagnostics& diag = result.diagnostics;
    log.diagnostics.push_back(to_json_line(diag));

    SimSample sample;
    sample.t = t;
    sample.x = x;
    sample.u = result.u;
    sample.nu = result.nu;
    sample.z = z;
    sample.cost = diag.cost;
    sample.wall_time = diag.wall_time;
    sample.slack_max = diag.slack_max;
    sample.iterations = diag.iterations;
    sample.status = diag.status;
    sample.degraded = diag.degraded;
    const Ellipsoid body = robot.translated(position_of(x));
    bool first = true;
    for (std::size_t o = 0; o < scenario.obstacles.size(); ++o) {
      const Ellipsoid obstacle = scenario.obstacles[o].at(t);
      sample.obstacle_centers.push_back(obstacle.center());
      const double lambda0 = diag.lambda(0, static_cast<Eigen::Index>(o));
      const double k_value = k_fused(lambda0, body, obstacle).k_value;
      const double k_min = minimize_k(body, obstacle).k_min;
      if (first || k_value > sample.k_value) {
        sample.k_value = k_value;
        sample.lambda0 = lambda0;
      }
      sample.k_min = first ? k_min : std::max(sample.k_min, k_min);
      first = false;
      OracleOptions options;
      options.seed = scenario.seed + static_cast<std::uint64_t>(i);
      sample.oracle_overlap = sample.oracle_overlap || intersects_oracle(body, obstacle, options);
    }
    sample.path_deviation = scenario.path.distance_to(position_of(x));
    sample.tracking_error = (position_of(x) - scenario.path.eval(z.s).head<3>()).norm();
    log.samples.push_back(std::move(sample));

    infeasible_run = diag.status == SolveStatus::Infeasible ? infeasible_run + 1 : 0;
    if (infeasible_run >= kMaxConsecutiveInfeasible) {
      log.aborted = true;
      log.abort_reason = "controller infeasible for " + std::to_string(infeasible_run) +
                         " consecutive steps at t = " + std::to_string(t);
      break;
    }
    if (i + 1 < count) {
      x = propagate_plant(x, result.u, plant, delta);
      z = step_timing(z, result.nu, delta);
    }
  }
  log.summary = metrics(log);
  return log;
}

double ecdf_quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(q * n)));
  return values[std::min(rank, values.size()) - 1];
}

SimSummary metrics(const SimLog& log) {
  SimSummary out;
  const auto& samples = log.samples;
  out.samples = static_cast<int>(samples.size());
  if (samples.empty()) return out;

  std::vector<double> walls;
  walls.reserve(samples.size());
  double lambda_sum = 0.0;
  double lambda_sq = 0.0;
  out.k_trace_min = out.k_trace_max = samples.front().k_value;
  out.k_min_min = out.k_min_max = samples.front().k_min;
  out.lambda0_min = out.lambda0_max = samples.front().lambda0;
  int run = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const SimSample& s = samples[i];
    walls.push_back(s.wall_time);
    out.overlap_steps += s.oracle_overlap ? 1 : 0;
    out.k_trace_min = std::min(out.k_trace_min, s.k_value);
    out.k_trace_max = std::max(out.k_trace_max, s.k_value);
    out.k_min_min = std::min(out.k_min_min, s.k_min);
    out.k_min_max = std::max(out.k_min_max, s.k_min);
    out.lambda0_min = std::min(out.lambda0_min, s.lambda0);
    out.lambda0_max = std::max(out.lambda0_max, s.lambda0);
    lambda_sum += s.lambda0;
    lambda_sq += s.lambda0 * s.lambda0;
    out.max_path_deviation = std::max(out.max_path_deviation, s.path_deviation);
    out.max_tracking_error = std::max(out.max_tracking_error, s.tracking_error);
    out.total_cost += s.cost;
    out.slack_max = std::max(out.slack_max, s.slack_max);
    out.degraded_steps += s.degraded ? 1 : 0;
    out.infeasible_steps += s.status == SolveStatus::Infeasible ? 1 : 0;

    const bool contact = !s.obstacle_centers.empty() && std::abs(s.k_min) <= kContactBand;
    run = contact ? run + 1 : 0;
    if (run > out.contact_samples) {
      out.contact_samples = run;
      out.contact_start = samples[i + 1 - run].t;
      out.contact_end = s.t;
    }
  }
  const double n = static_cast<double>(samples.size());
  const double mean = lambda_sum / n;
  out.lambda0_std = std::sqrt(std::max(0.0, lambda_sq / n - mean * mean));
  out.wall_p50 = ecdf_quantile(walls, 0.50);
  out.wall_p75 = ecdf_quantile(walls, 0.75);
  out.wall_p95 = ecdf_quantile(walls, 0.95);
  out.wall_max = ecdf_quantile(walls, 1.0);
  out.terminal_s = samples.back().z.s;
  return out;
}

std::vector<SimLog> run_batch(const std::vector<Scenario>& scenarios, Execution execution) {
  std::vector<SimLog> logs(scenarios.size());
  const long n = static_cast<long>(scenarios.size());
  if (execution == Execution::Serial || n < 2) {
    for (long i = 0; i < n; ++i) logs[i] = run(scenarios[i]);
    return logs;
  }
  std::vector<std::exception_ptr> errors(scenarios.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      logs[i] = run(scenarios[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return logs;
}

}  // namespace ellmpc
