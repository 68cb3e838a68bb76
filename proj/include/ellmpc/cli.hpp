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

#ifndef ELLMPC_CLI_HPP
#define ELLMPC_CLI_HPP

#include "ellmpc/simulator.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ellmpc {

/// Exit codes of the command-line tool.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kOverlap = 2;
inline constexpr int kTouching = 3;
inline constexpr int kOverlapping = 4;
}  // namespace exit_code

/// Flag values that take precedence over the scenario file.
struct CliOverrides {
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<int> i_max;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
};

struct CliConfig {
  std::string subcommand;
  std::string scenario = "demo-static";
  std::string out_dir = "out";
  CliOverrides overrides;
};

/// Applies the overrides and re-validates; throws std::invalid_argument.
void apply_overrides(Scenario& scenario, const CliOverrides& overrides);

/// Loads the scenario named in `config` with its overrides applied.
Scenario effective_scenario(const CliConfig& config);

int cmd_simulate(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_collision(const std::string& file_a, const std::string& file_b, std::ostream& out,
                  std::ostream& err);
/// One fixed-lambda run per entry plus a two-stage baseline; writes comparison.csv.
int cmd_sweep_lambda(const CliConfig& config, const std::vector<double>& lambdas,
                     std::ostream& out, std::ostream& err);
/// Pools the step wall times of `reps` runs; writes tcomp_ecdf.csv and bench.json.
int cmd_bench(const CliConfig& config, int reps, std::ostream& out, std::ostream& err);
/// Prints the effective scenario.
int cmd_validate(const CliConfig& config, std::ostream& out, std::ostream& err);

/// Parses the arguments and dispatches to a subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ellmpc

#endif  // ELLMPC_CLI_HPP
