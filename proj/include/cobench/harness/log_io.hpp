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

// JSON-lines trial logs: a header line, then one line per simulation step.

#pragma once

#include "cobench/harness/trial.hpp"

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace cobench::harness {

inline Json step_json(const StepRecord& r) {
  return {{"seq", r.seq},
          {"t", r.t},
          {"pose", {r.pose.x, r.pose.y, r.pose.theta}},
          {"twist", {r.twist.vx, r.twist.vy, r.twist.wz}},
          {"accel", {r.accel.vx, r.accel.vy, r.accel.wz}},
          {"wrench", wrench_json(r.wrench)},
          {"force", vec3_json(r.sensed_force)},
          {"torque", vec3_json(r.sensed_torque)},
          {"leader_tz", r.leader_tz},
          {"grasp_tz", r.grasp_tz},
          {"coord", r.coordinate},
          {"tz_ref", r.tz_ref},
          {"tx_ref", r.tx_ref},
          {"cmd", {r.command.twist.vx, r.command.twist.vy, r.command.twist.wz}},
          {"mode", r.command.mode},
          {"sat", r.saturated}};
}

inline StepRecord step_from(const Json& j) {
  StepRecord r;
  auto triple = [](const Json& a) {
    require(a.is_array() && a.size() == 3, "log: expected a 3-element array");
    return std::array<double, 3>{a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
  };
  r.seq = j.at("seq").get<long>();
  r.t = j.at("t").get<double>();
  const auto p = triple(j.at("pose"));
  r.pose = {p[0], p[1], p[2]};
  const auto v = triple(j.at("twist"));
  r.twist = {v[0], v[1], v[2]};
  const auto a = triple(j.at("accel"));
  r.accel = {a[0], a[1], a[2]};
  r.wrench = wrench_from(j.at("wrench"));
  r.sensed_force = vec3_from(j.at("force"));
  r.sensed_torque = vec3_from(j.at("torque"));
  r.leader_tz = j.at("leader_tz").get<double>();
  r.grasp_tz = j.at("grasp_tz").get<double>();
  r.coordinate = j.at("coord").get<double>();
  r.tz_ref = j.at("tz_ref").get<double>();
  r.tx_ref = j.at("tx_ref").get<double>();
  const auto c = triple(j.at("cmd"));
  r.command.twist = {c[0], c[1], c[2]};
  r.command.mode = j.at("mode").get<Mode>();
  r.saturated = j.at("sat").get<bool>();
  return r;
}

inline void write_log(std::ostream& os, const TrialLog& log) {
  os << log.header.dump() << '\n';
  for (const auto& r : log.steps) os << step_json(r).dump() << '\n';
}

/// Parses a log and checks that every step appears exactly once, in order.
inline TrialLog read_log(std::istream& is) {
  TrialLog log;
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ValidationError("log line " + std::to_string(lineno) + ": " + e.what());
    }
    if (lineno == 1) {
      require(j.value("format", std::string()) == kLogFormat, "log: missing or unknown header");
      log.header = std::move(j);
      continue;
    }
    StepRecord r;
    try {
      r = step_from(j);
    } catch (const Json::exception& e) {
      throw ValidationError("log line " + std::to_string(lineno) + ": " + e.what());
    }
    require(r.seq == static_cast<long>(log.steps.size()),
            "log: step sequence broken at line " + std::to_string(lineno));
    require(log.steps.empty() || r.t > log.steps.back().t, "log: time not increasing at line " + std::to_string(lineno));
    log.steps.push_back(r);
  }
  require(!log.header.is_null(), "log: empty file");
  return log;
}

inline void save_log(const std::filesystem::path& p, const TrialLog& log) {
  std::ofstream os(p, std::ios::binary);
  require(os.good(), "cannot write " + p.string());
  write_log(os, log);
}

inline TrialLog load_log(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  require(is.good(), "cannot open " + p.string());
  return read_log(is);
}

inline Json report_json(const MetricsReport& m) {
  Json j = {{"controller", m.controller},
            {"task", m.task},
            {"seed", m.seed},
            {"completed", m.completed},
            {"timed_out", m.timed_out},
            {"completion_time", nullptr},
            {"duration", m.duration},
            {"final_error", m.final_error},
            {"mje", m.mje},
            {"mtm", m.mtm},
            {"torque_change", m.torque_change},
            {"avg_lateral_speed", m.avg_lateral_speed},
            {"peak_lateral_speed", m.peak_lateral_speed},
            {"avg_yaw_rate", m.avg_yaw_rate},
            {"peak_yaw_rate", m.peak_yaw_rate},
            {"mean_interaction_force", m.mean_interaction_force},
            {"mean_external_force", m.mean_external_force},
            {"force_ratio", m.force_ratio},
            {"saturated", m.saturated},
            {"limits_respected", m.limits_respected}};
  if (m.completion_time) j["completion_time"] = *m.completion_time;
  return j;
}

inline MetricsReport report_from(const Json& j) {
  MetricsReport m;
  m.controller = j.at("controller").get<std::string>();
  m.task = j.at("task").get<TaskSpec>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.completed = j.at("completed").get<bool>();
  m.timed_out = j.at("timed_out").get<bool>();
  if (!j.at("completion_time").is_null()) m.completion_time = j.at("completion_time").get<double>();
  m.duration = j.at("duration").get<double>();
  m.final_error = j.at("final_error").get<double>();
  m.mje = j.at("mje").get<double>();
  m.mtm = j.at("mtm").get<double>();
  m.torque_change = j.at("torque_change").get<double>();
  m.avg_lateral_speed = j.at("avg_lateral_speed").get<double>();
  m.peak_lateral_speed = j.at("peak_lateral_speed").get<double>();
  m.avg_yaw_rate = j.at("avg_yaw_rate").get<double>();
  m.peak_yaw_rate = j.at("peak_yaw_rate").get<double>();
  m.mean_interaction_force = j.at("mean_interaction_force").get<double>();
  m.mean_external_force = j.at("mean_external_force").get<double>();
  m.force_ratio = j.at("force_ratio").get<double>();
  m.saturated = j.at("saturated").get<bool>();
  m.limits_respected = j.at("limits_respected").get<bool>();
  return m;
}

/// Re-scores a saved log with the task and limits recorded in its header.
inline MetricsReport rescore(const TrialLog& log) {
  const BenchConfig c = log.header.at("config").get<BenchConfig>();
  MetricsReport m = score_trial(log, log.header.at("task").get<TaskSpec>(), c.geometry, c.controller.limits,
                                log.header.at("dt").get<double>());
  m.controller = log.header.at("controller").get<std::string>();
  m.seed = log.header.at("seed").get<std::uint64_t>();
  return m;
}

inline ReplayLeader replay_from(const TrialLog& log) {
  ReplayLeader r;
  for (const auto& s : log.steps) r.wrenches.push_back(s.wrench);
  return r;
}

}  // namespace cobench::harness
