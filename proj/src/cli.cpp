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

#include "ellmpc/cli.hpp"

#include "ellmpc/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace ellmpc {

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw std::invalid_argument("not a number: '" + item + "'");
    }
    values.push_back(v);
  }
  return values;
}

double mean_lambda0(const SimLog& log) {
  if (log.samples.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : log.samples) sum += s.lambda0;
  return sum / static_cast<double>(log.samples.size());
}

// Runs `body`, mapping exceptions to the error exit code.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const SchemaError& e) {
    err << "schema error at " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return exit_code::kError;
}

}  // namespace

void apply_overrides(Scenario& scenario, const CliOverrides& o) {
  if (o.alpha) scenario.config.collision_margin = *o.alpha;
  if (o.epsilon) scenario.controller.epsilon = *o.epsilon;
  if (o.i_max) scenario.controller.i_max = *o.i_max;
  if (o.mode) parse_mode(*o.mode, scenario.controller);
  if (o.seed) scenario.seed = *o.seed;
  if (o.duration) scenario.duration = *o.duration;
  scenario.validate();
}

Scenario effective_scenario(const CliConfig& config) {
  Scenario sc = load_scenario(config.scenario);
  apply_overrides(sc, config.overrides);
  return sc;
}

int cmd_simulate(const CliConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = effective_scenario(config);
    const SimLog log = run(sc);
    write_sim_outputs(log, sc, config.out_dir);
    const SimSummary& s = log.summary;
    out << sc.name << ": " << s.samples << " steps, overlap steps " << s.overlap_steps
        << ", max path deviation " << s.max_path_deviation << " m, terminal s " << s.terminal_s
        << ", wall p75 " << s.wall_p75 * 1e3 << " ms, max " << s.wall_max * 1e3 << " ms\n";
    if (s.overlap_steps > 0) {
      err << "overlap detected in " << s.overlap_steps << " steps\n";
      return exit_code::kOverlap;
    }
    if (log.aborted) {
      err << "aborted: " << log.abort_reason << "\n";
      return exit_code::kError;
    }
    return exit_code::kOk;
  });
}

int cmd_collision(const std::string& file_a, const std::string& file_b, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    const Ellipsoid a = ellipsoid_from_json(read_json_file(file_a), "");
    const Ellipsoid b = ellipsoid_from_json(read_json_file(file_b), "");
    const OverlapVerdict v = minimize_k(a, b);
    const Json j{{"k_min", v.k_min},
                 {"lambda_star", v.lambda_star},
                 {"classification", to_string(v.classification)}};
    out << j.dump() << "\n";
    switch (v.classification) {
      case Overlap::Separate:
        return exit_code::kOk;
      case Overlap::Touching:
        return exit_code::kTouching;
      case Overlap::Overlapping:
        return exit_code::kOverlapping;
    }
    return exit_code::kError;
  });
}

int cmd_sweep_lambda(const CliConfig& config, const std::vector<double>& lambdas,
                     std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (lambdas.empty()) throw std::invalid_argument("the lambda list is empty");
    const Scenario base = effective_scenario(config);
    std::vector<Scenario> runs;
    for (double lambda : lambdas) {
      Scenario sc = base;
      sc.controller.mode = ControllerMode::FixedLambda;
      sc.controller.fixed_lambda = lambda;
      sc.validate();
      runs.push_back(sc);
    }
    Scenario baseline = base;
    baseline.controller.mode = ControllerMode::TwoStage;
    runs.push_back(baseline);
    const std::vector<SimLog> logs = run_batch(runs, Execution::Parallel);

    std::filesystem::create_directories(config.out_dir);
    const auto file = std::filesystem::path(config.out_dir) / "comparison.csv";
    std::ofstream csv(file);
    if (!csv) throw std::runtime_error("cannot write " + file.string());
    csv << std::setprecision(17);
    csv << "mode,lambda,max_path_deviation,total_cost,overlap_steps,mean_lambda0,terminal_s\n";
    int overlaps = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const SimSummary& s = logs[i].summary;
      const bool fixed = runs[i].controller.mode == ControllerMode::FixedLambda;
      csv << to_string(runs[i].controller.mode) << ",";
      if (fixed) csv << runs[i].controller.fixed_lambda;
      csv << "," << s.max_path_deviation << "," << s.total_cost << "," << s.overlap_steps << ","
          << mean_lambda0(logs[i]) << "," << s.terminal_s << "\n";
      out << std::left << std::setw(10) << to_string(runs[i].controller.mode);
      if (fixed) out << " lambda " << runs[i].controller.fixed_lambda;
      out << "  deviation " << s.max_path_deviation << " m  cost " << s.total_cost
          << "  overlap steps " << s.overlap_steps << "\n";
      overlaps += s.overlap_steps;
    }
    return overlaps > 0 ? exit_code::kOverlap : exit_code::kOk;
  });
}

int cmd_bench(const CliConfig& config, int reps, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (reps < 1) throw std::invalid_argument("--reps must be at least 1");
    const Scenario sc = effective_scenario(config);
    std::vector<double> walls;
    // Serial on purpose: concurrent runs would distort the timings.
    for (int r = 0; r < reps; ++r) {
      const SimLog log = run(sc);
      for (const auto& s : log.samples) walls.push_back(s.wall_time);
    }
    std::sort(walls.begin(), walls.end());

    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path dir(config.out_dir);
    {
      std::ofstream csv(dir / "tcomp_ecdf.csv");
      if (!csv) throw std::runtime_error("cannot write " + (dir / "tcomp_ecdf.csv").string());
      csv << std::setprecision(17) << "wall_time,ecdf\n";
      for (std::size_t i = 0; i < walls.size(); ++i) {
        csv << walls[i] << "," << static_cast<double>(i + 1) / static_cast<double>(walls.size())
            << "\n";
      }
    }
    const double delta = sc.config.delta;
    const Json summary{{"scenario", sc.name},
                       {"reps", reps},
                       {"steps", walls.size()},
                       {"delta", delta},
                       {"p50", ecdf_quantile(walls, 0.50)},
                       {"p75", ecdf_quantile(walls, 0.75)},
                       {"p95", ecdf_quantile(walls, 0.95)},
                       {"max", ecdf_quantile(walls, 1.0)},
                       {"within_budget", ecdf_quantile(walls, 1.0) < delta}};
    std::ofstream(dir / "bench.json") << summary.dump(2) << "\n";
    out << summary.dump() << "\n";
    if (!(ecdf_quantile(walls, 1.0) < delta)) {
      err << "warning: slowest step " << ecdf_quantile(walls, 1.0) * 1e3
          << " ms is not below the control period " << delta * 1e3 << " ms\n";
    }
    return exit_code::kOk;
  });
}

int cmd_validate(const CliConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = effective_scenario(config);
    out << scenario_to_json(sc).dump(2) << "\n";
    return exit_code::kOk;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ellipsoidal collision avoidance in MPC path following"};
  app.require_subcommand(1);

  CliConfig config;
  double alpha = 0.0;
  double epsilon = 0.0;
  int i_max = 0;
  std::string mode;
  std::uint64_t seed = 0;
  double duration = 0.0;
  struct Flags {
    CLI::Option* alpha = nullptr;
    CLI::Option* epsilon = nullptr;
    CLI::Option* i_max = nullptr;
    CLI::Option* mode = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* duration = nullptr;
  };
  std::vector<Flags> flags;

  auto scenario_flags = [&](CLI::App* sub) {
    sub->add_option("--scenario", config.scenario, "Built-in scenario name or JSON file")
        ->capture_default_str();
    sub->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
    Flags f;
    f.alpha = sub->add_option("--alpha", alpha, "Collision margin");
    f.epsilon = sub->add_option("--epsilon", epsilon, "Lambda convergence threshold");
    f.i_max = sub->add_option("--i-max", i_max, "Alternations per control step");
    f.mode = sub->add_option("--mode", mode, "twostage | fixed:<lambda> | joint");
    f.seed = sub->add_option("--seed", seed, "Random seed");
    f.duration = sub->add_option("--duration", duration, "Simulated time in s");
    flags.push_back(f);
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Closed-loop simulation");
  scenario_flags(simulate);

  CLI::App* collision = app.add_subcommand("collision", "Overlap test of two ellipsoid files");
  std::string file_a;
  std::string file_b;
  collision->add_option("first", file_a, "Ellipsoid JSON {shape, center}")->required();
  collision->add_option("second", file_b, "Ellipsoid JSON {shape, center}")->required();

  CLI::App* sweep = app.add_subcommand("sweep-lambda", "Fixed-lambda runs against two-stage");
  scenario_flags(sweep);
  std::string lambda_text = "0.5,0.8";
  sweep->add_option("--lambdas", lambda_text, "Comma-separated lambda values")
      ->capture_default_str();

  CLI::App* bench = app.add_subcommand("bench", "Step wall-time distribution");
  scenario_flags(bench);
  int reps = 5;
  bench->add_option("--reps", reps, "Repetitions")->capture_default_str();

  CLI::App* validate = app.add_subcommand("validate", "Print the effective scenario");
  scenario_flags(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kError;
  }

  for (const Flags& f : flags) {
    if (f.alpha->count()) config.overrides.alpha = alpha;
    if (f.epsilon->count()) config.overrides.epsilon = epsilon;
    if (f.i_max->count()) config.overrides.i_max = i_max;
    if (f.mode->count()) config.overrides.mode = mode;
    if (f.seed->count()) config.overrides.seed = seed;
    if (f.duration->count()) config.overrides.duration = duration;
  }

  if (simulate->parsed()) {
    config.subcommand = "simulate";
    return cmd_simulate(config, out, err);
  }
  if (collision->parsed()) {
    config.subcommand = "collision";
    return cmd_collision(file_a, file_b, out, err);
  }
  if (sweep->parsed()) {
    config.subcommand = "sweep-lambda";
    std::vector<double> lambdas;
    try {
      lambdas = parse_list(lambda_text);
    } catch (const std::exception& e) {
      err << "error: --lambdas: " << e.what() << "\n";
      return exit_code::kError;
    }
    return cmd_sweep_lambda(config, lambdas, out, err);
  }
  if (bench->parsed()) {
    config.subcommand = "bench";
    return cmd_bench(config, reps, out, err);
  }
  config.subcommand = "validate";
  return cmd_validate(config, out, err);
}

}  // namespace ellmpc
