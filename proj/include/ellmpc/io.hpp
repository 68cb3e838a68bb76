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

#ifndef ELLMPC_IO_HPP
#define ELLMPC_IO_HPP

#include "ellmpc/simulator.hpp"

#include <json.hpp>  // vendored nlohmann/json

#include <filesystem>
#include <stdexcept>
#include <string>

namespace ellmpc {

using Json = nlohmann::json;

/// Schema violation; `pointer()` is the JSON pointer of the offending value.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

// Every parser accepts the JSON value and the pointer it was found at, so
// errors name the full path. Missing optional fields keep their defaults.

Json ellipsoid_to_json(const Ellipsoid& e);
Ellipsoid ellipsoid_from_json(const Json& j, const std::string& where = "");

Json vehicle_to_json(const VehicleParams& p);
VehicleParams vehicle_from_json(const Json& j, const std::string& where = "",
                                const VehicleParams& base = {});

Json path_to_json(const Path& path);
/// {"builtin": "demo"} or {"s_samples": [...], "points": [[x, y, z, psi], ...]}.
Path path_from_json(const Json& j, const std::string& where = "");

Json config_to_json(const OcpConfig& c);
OcpConfig config_from_json(const Json& j, const std::string& where = "",
                           const OcpConfig& base = {});

Json controller_to_json(const ControllerSettings& s);
ControllerSettings controller_from_json(const Json& j, const std::string& where = "",
                                        const ControllerSettings& base = {});

/// Fields listed in the README; "extends" names a built-in scenario to start from.
Json scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const Json& j);

/// Reads a file, reporting JSON syntax errors with their byte offset.
Json read_json_file(const std::filesystem::path& file);

/// Built-in name or path to a scenario file.
Scenario load_scenario(const std::string& spec);

Json summary_to_json(const SimSummary& s);

/// {cost, kkt_residual, status, wall_time, slack_max}.
Json solve_summary_to_json(const SolveOutput& out);
/// One row per stage k = 0..N; input columns are empty on the last row.
void write_solve_csv(const SolveOutput& out, const std::filesystem::path& file);

/**
 * traces.csv, summary.json (with the effective scenario), diagnostics.jsonl
 * and plots/ with one CSV per figure-style view of the run.
 */
void write_sim_outputs(const SimLog& log, const Scenario& scenario,
                       const std::filesystem::path& dir);

}  // namespace ellmpc

#endif  // ELLMPC_IO_HPP
