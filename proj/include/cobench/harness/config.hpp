// Copyright 2026 The cobench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "cobench/harness/json.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace cobench::harness {

inline constexpr const char* kConfigEnv = "COBENCH_CONFIG";

struct GraspConfig {
  double kxy = 300.0;    // N/m
  double ktheta = 60.0;  // N m/rad

  bool operator==(const GraspConfig&) const = default;
};

struct ControllerConfig {
  std::string type = "evic";  // bmvic | evic | nnpc
  VicParams vic;
  EvicParams evic;
  VelocityLimits limits;
  NnpcParams nnpc;
  std::string model;  // model file for nnpc

  bool operator==(const ControllerConfig&) const = default;
};

/// Per-trial random variation of the scripted leader, as fractions.
struct LeaderJitter {
  double amplitude = 0.0;  // trigger torque amplitude scale
  double timing = 0.0;     // trigger rise and hold times
  double speed = 0.0;      // cruise speed and acceleration

  bool operator==(const LeaderJitter&) const = default;
};

struct LeaderConfig {
  std::string source = "scripted";  // scripted | live | replay
  std::optional<LeaderStyle> style;  // default: triggers for evic, motion otherwise
  LeaderParams params;
  LeaderGains motion_gains{400.0, 80.0, 400.0, 80.0};  // replace params.gains when motion-led
  LeaderJitter jitter;
  std::string replay_log;

  bool operator==(const LeaderConfig&) const = default;
};

struct BenchConfig {
  TableGeometry geometry;
  GraspConfig grasp;
  ControllerConfig controller;
  LeaderConfig leader;
  std::vector<TaskSpec> tasks;
  std::string task_script;
  std::optional<std::uint64_t> seed;
  double dt = 0.002;           // s
  double timeout = 30.0;       // s
  double settle_hold = 1.0;    // s the 95% band must be held
  double sensor_noise = 0.0;   // N, per handle axis
  std::string output_dir = "out";
  int port = 8765;

  /// Leader parameters with the style resolved and the matching gains.
  LeaderParams leader_params() const {
    LeaderParams p = leader.params;
    p.style = leader_style();
    if (p.style == LeaderStyle::MotionLed) p.gains = leader.motion_gains;
    return p;
  }

  LeaderStyle leader_style() const {
    if (leader.style) return *leader.style;
    return controller.type == "evic" ? LeaderStyle::TorqueTriggers : LeaderStyle::MotionLed;
  }

  void validate() const {
    geometry.validate();
    require(controller.type == "bmvic" || controller.type == "evic" || controller.type == "nnpc",
            "controller type must be bmvic, evic or nnpc");
    controller.vic.validate();
    controller.evic.validate();
    controller.limits.validate();
    controller.nnpc.validate();
    require(leader.source == "scripted" || leader.source == "live" || leader.source == "replay",
            "leader source must be scripted, live or replay");
    leader.params.validate();
    require(leader.motion_gains.kp >= 0 && leader.motion_gains.kd >= 0 && leader.motion_gains.k_theta >= 0 &&
                leader.motion_gains.d_theta >= 0,
            "leader gains must be non-negative");
    require(leader.jitter.amplitude >= 0.0 && leader.jitter.timing >= 0.0 && leader.jitter.speed >= 0.0 &&
                leader.jitter.amplitude < 1.0 && leader.jitter.timing < 1.0 && leader.jitter.speed < 1.0,
            "leader jitter fractions must be in [0, 1)");
    require(leader.source != "scripted" || seed.has_value(), "a scripted leader needs a seed");
    require(leader.source != "replay" || !leader.replay_log.empty(), "a replay leader needs replay_log");
    require(grasp.kxy >= 0.0 && grasp.ktheta >= 0.0, "grasp stiffness must be non-negative");
    require(finite(dt) && dt > 0.0 && dt <= 0.01, "dt must be in (0, 0.01]");
    require(finite(timeout) && timeout > 0.0, "timeout must be positive");
    require(finite(settle_hold) && settle_hold >= 0.0, "settle hold must be non-negative");
    require(finite(sensor_noise) && sensor_noise >= 0.0, "sensor noise must be non-negative");
    require(port > 0 && port < 65536, "port must be in 1..65535");
    for (const auto& t : tasks) t.validate();
  }

  bool operator==(const BenchConfig&) const = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GraspConfig, kxy, ktheta)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ControllerConfig, type, vic, evic, limits, nnpc, model)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LeaderJitter, amplitude, timing, speed)

inline void to_json(Json& j, const LeaderConfig& c) {
  j = {{"source", c.source},
       {"params", c.params},
       {"motion_gains", c.motion_gains},
       {"jitter", c.jitter},
       {"replay_log", c.replay_log}};
  if (c.style) j["style"] = *c.style;
}

inline void from_json(const Json& j, LeaderConfig& c) {
  c = LeaderConfig{};
  c.source = j.value("source", c.source);
  if (j.contains("style") && !j.at("style").is_null()) c.style = j.at("style").get<LeaderStyle>();
  if (j.contains("params")) c.params = j.at("params").get<LeaderParams>();
  if (j.contains("motion_gains")) c.motion_gains = j.at("motion_gains").get<LeaderGains>();
  if (j.contains("jitter")) c.jitter = j.at("jitter").get<LeaderJitter>();
  c.replay_log = j.value("replay_log", c.replay_log);
}

inline void to_json(Json& j, const BenchConfig& c) {
  j = {{"geometry", c.geometry}, {"grasp", c.grasp},         {"controller", c.controller},
       {"leader", c.leader},     {"tasks", c.tasks},         {"task_script", c.task_script},
       {"dt", c.dt},             {"timeout", c.timeout},     {"settle_hold", c.settle_hold},
       {"sensor_noise", c.sensor_noise}, {"output_dir", c.output_dir}, {"port", c.port}};
  if (c.seed) j["seed"] = *c.seed;
}

inline void from_json(const Json& j, BenchConfig& c) {
  c = BenchConfig{};
  if (j.contains("geometry")) c.geometry = j.at("geometry").get<TableGeometry>();
  if (j.contains("grasp")) c.grasp = j.at("grasp").get<GraspConfig>();
  if (j.contains("controller")) c.controller = j.at("controller").get<ControllerConfig>();
  if (j.contains("leader")) c.leader = j.at("leader").get<LeaderConfig>();
  if (j.contains("tasks")) c.tasks = j.at("tasks").get<std::vector<TaskSpec>>();
  c.task_script = j.value("task_script", c.task_script);
  if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
  c.dt = j.value("dt", c.dt);
  c.timeout = j.value("timeout", c.timeout);
  c.settle_hold = j.value("settle_hold", c.settle_hold);
  c.sensor_noise = j.value("sensor_noise", c.sensor_noise);
  c.output_dir = j.value("output_dir", c.output_dir);
  c.port = j.value("port", c.port);
}

inline Json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  require(in.good(), "cannot open " + p.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(p.string() + ": " + e.what());
  }
}

/// A task script is a JSON array of task records.
inline std::vector<TaskSpec> load_task_script(const std::filesystem::path& p) {
  const Json j = read_json_file(p);
  require(j.is_array(), p.string() + ": task script must be a JSON array");
  auto tasks = j.get<std::vector<TaskSpec>>();
  for (const auto& t : tasks) t.validate();
  return tasks;
}

inline BenchConfig parse_config(const Json& j) {
  BenchConfig c;
  try {
    c = j.get<BenchConfig>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

/// Reads the config at `path`, or at $COBENCH_CONFIG when that is set.
/// Relative task script paths resolve against the config's directory.
inline BenchConfig load_config(std::filesystem::path path) {
  if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') path = env;
  BenchConfig c = parse_config(read_json_file(path));
  if (!c.task_script.empty() && c.tasks.empty()) {
    std::filesystem::path script = c.task_script;
    if (script.is_relative()) script = path.parent_path() / script;
    c.tasks = load_task_script(script);
  }
  return c;
}

}  // namespace cobench::harness
