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

#include "ellmpc/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace ellmpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string child(const std::string& where, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') {
      escaped += "~0";
    } else if (c == '/') {
      escaped += "~1";
    } else {
      escaped += c;
    }
  }
  return where + "/" + escaped;
}

std::string child(const std::string& where, std::size_t index) {
  return where + "/" + std::to_string(index);
}

std::string shown(const std::string& where) { return where.empty() ? "(root)" : where; }

void require_object(const Json& j, const std::string& where,
                    const std::set<std::string>& allowed) {
  if (!j.is_object()) throw SchemaError(shown(where), "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw SchemaError(child(where, it.key()), "unknown field");
  }
}

double get_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(shown(where), "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(shown(where), "expected a finite number");
  return v;
}

int get_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(shown(where), "expected an integer");
  return j.get<int>();
}

template <int Rows>
Eigen::Matrix<double, Rows, 1> get_vector(const Json& j, const std::string& where,
                                          bool allow_null = false, double null_value = 0.0) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(Rows)) {
    throw SchemaError(shown(where), "expected an array of " + std::to_string(Rows) + " numbers");
  }
  Eigen::Matrix<double, Rows, 1> v;
  for (int i = 0; i < Rows; ++i) {
    if (allow_null && j[i].is_null()) {
      v(i) = null_value;
    } else {
      v(i) = get_number(j[i], child(where, static_cast<std::size_t>(i)));
    }
  }
  return v;
}

template <int N>
Eigen::Matrix<double, N, N> get_matrix(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(N)) {
    throw SchemaError(shown(where),
                      "expected a " + std::to_string(N) + "x" + std::to_string(N) + " array");
  }
  Eigen::Matrix<double, N, N> m;
  for (int r = 0; r < N; ++r) {
    m.row(r) = get_vector<N>(j[r], child(where, static_cast<std::size_t>(r))).transpose();
  }
  return m;
}

template <typename Derived>
Json vector_json(const Eigen::MatrixBase<Derived>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v(i))) {
      out.push_back(v(i));
    } else {
      out.push_back(nullptr);
    }
  }
  return out;
}

template <typename Derived>
Json matrix_json(const Eigen::MatrixBase<Derived>& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << std::setprecision(17);
  return out;
}

// Wraps std::invalid_argument from validation into a schema error at `where`.
template <typename F>
void validated(const std::string& where, F&& check) {
  try {
    check();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(shown(where), e.what());
  }
}

}  // namespace

Json ellipsoid_to_json(const Ellipsoid& e) {
  return Json{{"shape", matrix_json(e.shape())}, {"center", vector_json(e.center())}};
}

Ellipsoid ellipsoid_from_json(const Json& j, const std::string& where) {
  require_object(j, where, {"shape", "center"});
  if (!j.contains("shape")) throw SchemaError(child(where, "shape"), "missing field");
  if (!j.contains("center")) throw SchemaError(child(where, "center"), "missing field");
  const Mat3 shape = get_matrix<3>(j["shape"], child(where, "shape"));
  const Vec3 center = get_vector<3>(j["center"], child(where, "center"));
  try {
    return Ellipsoid(shape, center);
  } catch (const GeometryError& e) {
    throw SchemaError(child(where, "shape"), e.what());
  }
}

Json vehicle_to_json(const VehicleParams& p) {
  return Json{{"mass", p.mass},
              {"gravity", p.gravity},
              {"roll_lag", p.roll_lag},
              {"pitch_lag", p.pitch_lag}};
}

VehicleParams vehicle_from_json(const Json& j, const std::string& where,
                                const VehicleParams& base) {
  require_object(j, where, {"mass", "gravity", "roll_lag", "pitch_lag"});
  VehicleParams p = base;
  if (j.contains("mass")) p.mass = get_number(j["mass"], child(where, "mass"));
  if (j.contains("gravity")) p.gravity = get_number(j["gravity"], child(where, "gravity"));
  if (j.contains("roll_lag")) p.roll_lag = get_number(j["roll_lag"], child(where, "roll_lag"));
  if (j.contains("pitch_lag")) p.pitch_lag = get_number(j["pitch_lag"], child(where, "pitch_lag"));
  validated(where, [&] { p.validate(); });
  return p;
}

Json path_to_json(const Path& path) {
  if (path.name() == "demo") return Json{{"builtin", "demo"}};
  if (!path.waypoints().empty()) {
    Json points = Json::array();
    for (const auto& p : path.waypoints()) points.push_back(vector_json(p));
    return Json{{"s_samples", path.waypoint_s()}, {"points", points}};
  }
  throw std::invalid_argument("path '" + path.name() + "' has no JSON representation");
}

Path path_from_json(const Json& j, const std::string& where) {
  require_object(j, where, {"builtin", "s_samples", "points"});
  if (j.contains("builtin")) {
    if (j.size() != 1) throw SchemaError(shown(where), "builtin path takes no other fields");
    if (j["builtin"] != "demo") {
      throw SchemaError(child(where, "builtin"), "unknown builtin path (expected \"demo\")");
    }
    return Path::demo();
  }
  if (!j.contains("s_samples")) throw SchemaError(child(where, "s_samples"), "missing field");
  if (!j.contains("points")) throw SchemaError(child(where, "points"), "missing field");
  const Json& js = j["s_samples"];
  const Json& jp = j["points"];
  const std::string ws = child(where, "s_samples");
  const std::string wp = child(where, "points");
  if (!js.is_array()) throw SchemaError(ws, "expected an array");
  if (!jp.is_array()) throw SchemaError(wp, "expected an array");
  if (js.size() != jp.size()) throw SchemaError(wp, "needs one point per s sample");
  std::vector<double> s;
  std::vector<OutputVector> points;
  for (std::size_t i = 0; i < js.size(); ++i) {
    s.push_back(get_number(js[i], child(ws, i)));
    points.push_back(get_vector<4>(jp[i], child(wp, i)));
  }
  try {
    return Path::from_waypoints(s, points);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(ws, e.what());
  }
}

Json config_to_json(const OcpConfig& c) {
  Json j;
  j["horizon"] = c.horizon;
  j["delta"] = c.delta;
  j["W_y"] = matrix_json(c.W_y);
  j["W_s"] = c.W_s;
  j["W_u"] = matrix_json(c.W_u);
  j["W_nu"] = c.W_nu;
  j["u_min"] = vector_json(c.u_min);
  j["u_max"] = vector_json(c.u_max);
  j["nu_min"] = c.nu_min;
  j["nu_max"] = c.nu_max;
  j["s_dot_max"] = c.s_dot_max;
  j["s_dot_floor"] = c.s_dot_floor;
  j["state_min"] = c.state_min ? vector_json(*c.state_min) : Json(nullptr);
  j["state_max"] = c.state_max ? vector_json(*c.state_max) : Json(nullptr);
  j["soft_penalty_l1"] = c.soft_penalty_l1;
  j["soft_penalty_l2"] = c.soft_penalty_l2;
  j["collision_margin"] = c.collision_margin;
  j["sqp_max_iters"] = c.sqp_max_iters;
  j["kkt_tol"] = c.kkt_tol;
  j["rho_lambda"] = c.rho_lambda;
  return j;
}

OcpConfig config_from_json(const Json& j, const std::string& where, const OcpConfig& base) {
  require_object(j, where,
                 {"horizon", "delta", "W_y", "W_s", "W_u", "W_nu", "u_min", "u_max", "nu_min",
                  "nu_max", "s_dot_max", "s_dot_floor", "state_min", "state_max",
                  "soft_penalty_l1", "soft_penalty_l2", "collision_margin", "sqp_max_iters",
                  "kkt_tol", "rho_lambda"});
  OcpConfig c = base;
  auto num = [&](const char* key, double& out) {
    if (j.contains(key)) out = get_number(j[key], child(where, key));
  };
  if (j.contains("horizon")) c.horizon = get_int(j["horizon"], child(where, "horizon"));
  if (j.contains("sqp_max_iters")) {
    c.sqp_max_iters = get_int(j["sqp_max_iters"], child(where, "sqp_max_iters"));
  }
  num("delta", c.delta);
  num("W_s", c.W_s);
  num("W_nu", c.W_nu);
  num("nu_min", c.nu_min);
  num("nu_max", c.nu_max);
  num("s_dot_max", c.s_dot_max);
  num("s_dot_floor", c.s_dot_floor);
  num("soft_penalty_l1", c.soft_penalty_l1);
  num("soft_penalty_l2", c.soft_penalty_l2);
  num("collision_margin", c.collision_margin);
  num("kkt_tol", c.kkt_tol);
  num("rho_lambda", c.rho_lambda);
  if (j.contains("W_y")) c.W_y = get_matrix<4>(j["W_y"], child(where, "W_y"));
  if (j.contains("W_u")) c.W_u = get_matrix<4>(j["W_u"], child(where, "W_u"));
  if (j.contains("u_min")) c.u_min = get_vector<4>(j["u_min"], child(where, "u_min"));
  if (j.contains("u_max")) c.u_max = get_vector<4>(j["u_max"], child(where, "u_max"));
  // null entries leave a state component unbounded.
  if (j.contains("state_min")) {
    if (j["state_min"].is_null()) {
      c.state_min.reset();
    } else {
      c.state_min = get_vector<kStateDim>(j["state_min"], child(where, "state_min"), true, -kInf);
    }
  }
  if (j.contains("state_max")) {
    if (j["state_max"].is_null()) {
      c.state_max.reset();
    } else {
      c.state_max = get_vector<kStateDim>(j["state_max"], child(where, "state_max"), true, kInf);
    }
  }
  validated(where, [&] { c.validate(); });
  return c;
}

Json controller_to_json(const ControllerSettings& s) {
  std::string mode = to_string(s.mode);
  if (s.mode == ControllerMode::FixedLambda) {
    std::ostringstream os;
    os << "fixed:" << std::setprecision(17) << s.fixed_lambda;
    mode = os.str();
  }
  return Json{{"mode", mode},
              {"i_max", s.i_max},
              {"epsilon", s.epsilon},
              {"wall_budget", s.wall_budget},
              {"lambda_tol", s.lambda_tol},
              {"parallel_lambda", s.execution == Execution::Parallel}};
}

ControllerSettings controller_from_json(const Json& j, const std::string& where,
                                        const ControllerSettings& base) {
  require_object(j, where,
                 {"mode", "i_max", "epsilon", "wall_budget", "lambda_tol", "parallel_lambda"});
  ControllerSettings s = base;
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw SchemaError(child(where, "mode"), "expected a string");
    validated(child(where, "mode"), [&] { parse_mode(j["mode"].get<std::string>(), s); });
  }
  if (j.contains("i_max")) s.i_max = get_int(j["i_max"], child(where, "i_max"));
  if (j.contains("epsilon")) s.epsilon = get_number(j["epsilon"], child(where, "epsilon"));
  if (j.contains("wall_budget")) {
    s.wall_budget = get_number(j["wall_budget"], child(where, "wall_budget"));
  }
  if (j.contains("lambda_tol")) {
    s.lambda_tol = get_number(j["lambda_tol"], child(where, "lambda_tol"));
  }
  if (j.contains("parallel_lambda")) {
    if (!j["parallel_lambda"].is_boolean()) {
      throw SchemaError(child(where, "parallel_lambda"), "expected a boolean");
    }
    s.execution = j["parallel_lambda"].get<bool>() ? Execution::Parallel : Execution::Serial;
  }
  validated(where, [&] { s.validate(); });
  return s;
}

Json scenario_to_json(const Scenario& sc) {
  Json obstacles = Json::array();
  for (const auto& o : sc.obstacles) {
    Json item = ellipsoid_to_json(o.base);
    item["velocity"] = vector_json(o.velocity);
    obstacles.push_back(item);
  }
  Json j;
  j["name"] = sc.name;
  j["path"] = path_to_json(sc.path);
  j["vehicle"] = vehicle_to_json(sc.vehicle);
  j["robot_shape"] = matrix_json(sc.robot_shape);
  j["obstacles"] = obstacles;
  j["initial_state"] = vector_json(sc.x0);
  j["initial_timing"] = Json{{"s", sc.z0.s}, {"s_dot", sc.z0.s_dot}};
  j["duration"] = sc.duration;
  j["config"] = config_to_json(sc.config);
  j["controller"] = controller_to_json(sc.controller);
  j["noise"] = Json{{"position_std", sc.noise.position_std},
                    {"velocity_window", sc.noise.velocity_window}};
  j["mass_perturbation_pct"] = sc.mass_perturbation_pct;
  j["seed"] = sc.seed;
  return j;
}

Scenario scenario_from_json(const Json& j) {
  require_object(j, "",
                 {"extends", "name", "path", "vehicle", "robot_shape", "obstacles",
                  "initial_state", "initial_timing", "duration", "config", "controller", "noise",
                  "mass_perturbation_pct", "seed"});
  Scenario sc;
  if (j.contains("extends")) {
    const Json& e = j["extends"];
    if (!e.is_string() || !is_builtin_scenario(e.get<std::string>())) {
      throw SchemaError("/extends", "expected the name of a built-in scenario");
    }
    sc = builtin_scenario(e.get<std::string>());
  }
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw SchemaError("/name", "expected a string");
    sc.name = j["name"].get<std::string>();
  }
  if (j.contains("path")) sc.path = path_from_json(j["path"], "/path");
  if (j.contains("vehicle")) sc.vehicle = vehicle_from_json(j["vehicle"], "/vehicle", sc.vehicle);
  if (j.contains("robot_shape")) {
    sc.robot_shape = get_matrix<3>(j["robot_shape"], "/robot_shape");
    try {
      if (!Ellipsoid(sc.robot_shape, Vec3::Zero()).strictly_pd()) {
        throw SchemaError("/robot_shape", "robot shape must be strictly positive definite");
      }
    } catch (const GeometryError& e) {
      throw SchemaError("/robot_shape", e.what());
    }
  }
  if (j.contains("obstacles")) {
    const Json& jo = j["obstacles"];
    if (!jo.is_array()) throw SchemaError("/obstacles", "expected an array");
    sc.obstacles.clear();
    for (std::size_t i = 0; i < jo.size(); ++i) {
      const std::string where = child("/obstacles", i);
      require_object(jo[i], where, {"shape", "center", "velocity"});
      Json body = jo[i];
      body.erase("velocity");
      ObstacleTrack track{ellipsoid_from_json(body, where), Vec3::Zero()};
      if (jo[i].contains("velocity")) {
        track.velocity = get_vector<3>(jo[i]["velocity"], child(where, "velocity"));
      }
      sc.obstacles.push_back(track);
    }
  }
  if (j.contains("initial_state")) {
    sc.x0 = get_vector<kStateDim>(j["initial_state"], "/initial_state");
  }
  if (j.contains("initial_timing")) {
    const Json& jz = j["initial_timing"];
    require_object(jz, "/initial_timing", {"s", "s_dot"});
    if (jz.contains("s")) sc.z0.s = get_number(jz["s"], "/initial_timing/s");
    if (jz.contains("s_dot")) sc.z0.s_dot = get_number(jz["s_dot"], "/initial_timing/s_dot");
  }
  if (j.contains("duration")) sc.duration = get_number(j["duration"], "/duration");
  if (j.contains("config")) sc.config = config_from_json(j["config"], "/config", sc.config);
  if (j.contains("controller")) {
    sc.controller = controller_from_json(j["controller"], "/controller", sc.controller);
  }
  if (j.contains("noise")) {
    const Json& jn = j["noise"];
    require_object(jn, "/noise", {"position_std", "velocity_window"});
    if (jn.contains("position_std")) {
      sc.noise.position_std = get_number(jn["position_std"], "/noise/position_std");
    }
    if (jn.contains("velocity_window")) {
      sc.noise.velocity_window = get_int(jn["velocity_window"], "/noise/velocity_window");
    }
  }
  if (j.contains("mass_perturbation_pct")) {
    sc.mass_perturbation_pct = get_number(j["mass_perturbation_pct"], "/mass_perturbation_pct");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw SchemaError("/seed", "expected a nonnegative integer");
    sc.seed = j["seed"].get<std::uint64_t>();
  }
  validated("", [&] { sc.validate(); });
  return sc;
}

Json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("(root)", file.string() + " is not valid JSON (byte " +
                                    std::to_string(e.byte) + ")");
  }
}

Scenario load_scenario(const std::string& spec) {
  if (is_builtin_scenario(spec)) return builtin_scenario(spec);
  if (!std::filesystem::exists(spec)) {
    throw std::runtime_error("'" + spec + "' is neither a built-in scenario nor a file");
  }
  return scenario_from_json(read_json_file(spec));
}

Json summary_to_json(const SimSummary& s) {
  return Json{{"samples", s.samples},
              {"overlap_steps", s.overlap_steps},
              {"wall_time", {{"p50", s.wall_p50}, {"p75", s.wall_p75}, {"p95", s.wall_p95},
                             {"max", s.wall_max}}},
              {"k_trace", {{"min", s.k_trace_min}, {"max", s.k_trace_max}}},
              {"k_min", {{"min", s.k_min_min}, {"max", s.k_min_max}}},
              {"lambda0", {{"min", s.lambda0_min}, {"max", s.lambda0_max},
                           {"std", s.lambda0_std}}},
              {"max_path_deviation", s.max_path_deviation},
              {"max_tracking_error", s.max_tracking_error},
              {"terminal_s", s.terminal_s},
              {"total_cost", s.total_cost},
              {"slack_max", s.slack_max},
              {"contact", {{"samples", s.contact_samples}, {"start", s.contact_start},
                           {"end", s.contact_end}}},
              {"degraded_steps", s.degraded_steps},
              {"infeasible_steps", s.infeasible_steps}};
}

Json solve_summary_to_json(const SolveOutput& out) {
  return Json{{"cost", out.cost},
              {"kkt_residual", out.kkt_residual},
              {"status", to_string(out.status)},
              {"wall_time", out.wall_time},
              {"slack_max", out.slack_max}};
}

void write_solve_csv(const SolveOutput& out, const std::filesystem::path& file) {
  std::ofstream csv = open_out(file);
  const int n_obs = static_cast<int>(out.lambda_params.cols());
  csv << "k,px,py,pz,vx,vy,vz,roll,pitch,yaw,s,s_dot,thrust,roll_cmd,pitch_cmd,yaw_rate_cmd,nu";
  for (int o = 0; o < n_obs; ++o) csv << ",lambda_" << o << ",slack_" << o << ",K_" << o;
  csv << "\n";
  const int n = out.horizon();
  for (int k = 0; k <= n; ++k) {
    csv << k;
    for (int i = 0; i < kStateDim; ++i) csv << "," << out.states(k, i);
    csv << "," << out.timing_states(k, 0) << "," << out.timing_states(k, 1);
    for (int i = 0; i < kInputDim; ++i) {
      csv << ",";
      if (k < n) csv << out.inputs(k, i);
    }
    csv << ",";
    if (k < n) csv << out.virtual_inputs(k);
    for (int o = 0; o < n_obs; ++o) {
      csv << "," << out.lambda_params(k, o) << "," << out.slacks(k, o) << ","
          << out.collision_values(k, o);
    }
    csv << "\n";
  }
}

void write_sim_outputs(const SimLog& log, const Scenario& scenario,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "plots");
  const std::size_t n_obs = scenario.obstacles.size();

  {
    std::ofstream csv = open_out(dir / "traces.csv");
    csv << "t,px,py,pz,vx,vy,vz,roll,pitch,yaw,thrust,roll_cmd,pitch_cmd,yaw_rate_cmd,nu,s,s_dot,"
           "lambda0,K,k_min,J,wall_time,slack_max,iters,status,degraded,oracle_overlap,"
           "path_deviation,tracking_error";
    for (std::size_t o = 0; o < n_obs; ++o) csv << ",obs" << o << "_x,obs" << o << "_y,obs" << o << "_z";
    csv << "\n";
    for (const auto& s : log.samples) {
      csv << s.t;
      for (int i = 0; i < kStateDim; ++i) csv << "," << s.x(i);
      for (int i = 0; i < kInputDim; ++i) csv << "," << s.u(i);
      csv << "," << s.nu << "," << s.z.s << "," << s.z.s_dot << "," << s.lambda0 << ","
          << s.k_value << "," << s.k_min << "," << s.cost << "," << s.wall_time << ","
          << s.slack_max << "," << s.iterations << "," << to_string(s.status) << ","
          << (s.degraded ? 1 : 0) << "," << (s.oracle_overlap ? 1 : 0) << ","
          << s.path_deviation << "," << s.tracking_error;
      for (const auto& c : s.obstacle_centers) csv << "," << c.x() << "," << c.y() << "," << c.z();
      csv << "\n";
    }
  }
  {
    Json summary = summary_to_json(log.summary);
    summary["aborted"] = log.aborted;
    summary["abort_reason"] = log.abort_reason;
    summary["scenario"] = scenario_to_json(scenario);
    std::ofstream out = open_out(dir / "summary.json");
    out << summary.dump(2) << "\n";
  }
  {
    std::ofstream out = open_out(dir / "diagnostics.jsonl");
    for (const auto& line : log.diagnostics) out << line << "\n";
  }

  const std::filesystem::path plots = dir / "plots";
  {
    std::ofstream csv = open_out(plots / "trajectory.csv");
    csv << "t,x,y,z,ref_x,ref_y,ref_z\n";
    for (const auto& s : log.samples) {
      const OutputVector ref = scenario.path.eval(s.z.s);
      csv << s.t << "," << s.x(0) << "," << s.x(1) << "," << s.x(2) << "," << ref(0) << ","
          << ref(1) << "," << ref(2) << "\n";
    }
  }
  {
    std::ofstream csv = open_out(plots / "k_lambda.csv");
    csv << "t,K,k_min,lambda0\n";
    for (const auto& s : log.samples) {
      csv << s.t << "," << s.k_value << "," << s.k_min << "," << s.lambda0 << "\n";
    }
  }
  {
    std::vector<double> walls;
    for (const auto& s : log.samples) walls.push_back(s.wall_time);
    std::sort(walls.begin(), walls.end());
    std::ofstream csv = open_out(plots / "tcomp_ecdf.csv");
    csv << "wall_time,ecdf\n";
    for (std::size_t i = 0; i < walls.size(); ++i) {
      csv << walls[i] << "," << static_cast<double>(i + 1) / static_cast<double>(walls.size())
          << "\n";
    }
  }
  {
    std::ofstream csv = open_out(plots / "cost.csv");
    csv << "t,J\n";
    for (const auto& s : log.samples) csv << s.t << "," << s.cost << "\n";
  }
  {
    std::ofstream csv = open_out(plots / "moving_obstacle.csv");
    csv << "t,x,y,z";
    for (std::size_t o = 0; o < n_obs; ++o) csv << ",obs" << o << "_x,obs" << o << "_y,obs" << o << "_z";
    csv << ",K\n";
    for (const auto& s : log.samples) {
      csv << s.t << "," << s.x(0) << "," << s.x(1) << "," << s.x(2);
      for (const auto& c : s.obstacle_centers) csv << "," << c.x() << "," << c.y() << "," << c.z();
      csv << "," << s.k_value << "\n";
    }
  }
}

}  // namespace ellmpc
