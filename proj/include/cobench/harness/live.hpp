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

// Live session: an external client supplies the leader wrench. No transport
// and no clock here; the caller ticks it once per simulation step. Message
// schema is in docs/protocol.md.

#pragma once

#include "cobench/harness/log_io.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cobench::harness {

struct LiveOptions {
  double hold = 0.2;          // s a force message stays in effect
  double pause_after = 2.0;   // s after disconnect before the loop pauses
  int broadcast_every = 10;   // steps between state messages
};

class LiveSession {
 public:
  explicit LiveSession(BenchConfig config, std::shared_ptr<const intent::RecurrentModel> model = nullptr,
                       LiveOptions opt = {})
      : config_(std::move(config)), model_(std::move(model)), opt_(opt) {
    config_.leader.source = "live";
    config_.validate();
    require(opt_.hold >= 0.0 && opt_.pause_after >= 0.0 && opt_.broadcast_every >= 1, "bad live options");
    if (config_.controller.type == "nnpc" && !model_)
      model_ = std::make_shared<const intent::RecurrentModel>(intent::load_model(config_.controller.model));
    task_ = config_.tasks.empty() ? TaskSpec{} : config_.tasks.front();
    restart();
  }

  /// A client attached; returns the config echo.
  std::vector<Json> connect() {
    connected_ = true;
    paused_ = false;
    last_in_seq_.reset();
    return {config_message()};
  }

  void disconnect() {
    connected_ = false;
    disconnect_time_ = sim_->time();
    force_time_.reset();
  }

  /// Handles one client message, returning any direct replies.
  std::vector<Json> receive(const Json& msg) {
    std::string type;
    long seq = 0;
    try {
      type = msg.at("type").get<std::string>();
      seq = msg.at("seq").get<long>();
    } catch (const Json::exception&) {
      return {error_message("message needs string 'type' and integer 'seq'")};
    }
    if (last_in_seq_ && seq <= *last_in_seq_) return {error_message("stale sequence number " + std::to_string(seq))};
    last_in_seq_ = seq;
    try {
      if (type == "force") {
        HandleWrench w;
        w.left = vec3_from(msg.at("left"));
        w.right = vec3_from(msg.at("right"));
        require(w.finite(), "force must be finite");
        wrench_ = w;
        force_time_ = sim_->time();
        return {};
      }
      if (type == "reset") {
        restart();
        return {config_message()};
      }
      if (type == "select_task") {
        TaskSpec t = msg.at("task").get<TaskSpec>();
        t.validate();
        task_ = t;
        restart();
        return {config_message()};
      }
    } catch (const std::exception& e) {
      return {error_message(e.what())};
    }
    return {error_message("unknown message type '" + type + "'")};
  }

  std::vector<Json> receive_text(std::string_view text) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error&) {
      return {error_message("malformed JSON")};
    }
    return receive(j);
  }

  /// Advances one step unless paused. Returns the state snapshot when one is
  /// due and the trial result when the task settles or times out.
  std::vector<Json> tick() {
    std::vector<Json> out;
    if (!connected_ && sim_->time() - disconnect_time_ >= opt_.pause_after - 1e-9) paused_ = true;
    if (paused_) return out;
    HandleWrench w;
    if (connected_ && force_time_ && sim_->time() - *force_time_ <= opt_.hold + 1e-9) w = wrench_;
    StepRecord r = sim_->observe(w);
    log_.steps.push_back(r);
    const bool done = !finished_ && settle_->update(r.t, r.coordinate, config_.dt);
    const bool timeout = !finished_ && r.t >= config_.timeout - 1e-9;
    if (r.seq % opt_.broadcast_every == 0) out.push_back(state_message(r));
    if (done || timeout) {
      finished_ = true;
      MetricsReport m = score_trial(log_, task_, config_.geometry, config_.controller.limits, config_.dt);
      m.controller = config_.controller.type;
      m.seed = seed();
      m.completed = done && settle_->has_span();
      m.timed_out = !done;
      out.push_back(stamp({{"type", "trial_result"}, {"report", report_json(m)}}));
    }
    sim_->integrate();
    return out;
  }

  bool paused() const { return paused_; }
  bool connected() const { return connected_; }
  double time() const { return sim_->time(); }
  const TableState& state() const { return sim_->state(); }
  const TrialLog& log() const { return log_; }
  const TaskSpec& task() const { return task_; }
  const BenchConfig& config() const { return config_; }

 private:
  std::uint64_t seed() const { return config_.seed.value_or(0); }

  void restart() {
    sim_.emplace(config_, task_, model_, seed());
    settle_.emplace(task_, 0.0, config_.settle_hold);
    log_ = TrialLog{};
    log_.header = {{"format", kLogFormat}, {"controller", config_.controller.type}, {"seed", seed()},
                   {"dt", config_.dt},     {"task", task_},                         {"config", config_}};
    wrench_ = HandleWrench{};
    force_time_.reset();
    finished_ = false;
  }

  Json stamp(Json j) {
    j["seq"] = ++out_seq_;
    return j;
  }

  Json config_message() { return stamp({{"type", "config"}, {"config", config_}, {"task", task_}}); }

  Json error_message(const std::string& what) { return stamp({{"type", "error"}, {"message", what}}); }

  Json state_message(const StepRecord& r) {
    return stamp({{"type", "state"},
                  {"t", r.t},
                  {"step", r.seq},
                  {"pose", {r.pose.x, r.pose.y, r.pose.theta}},
                  {"twist", {r.twist.vx, r.twist.vy, r.twist.wz}},
                  {"torque", vec3_json(r.sensed_torque)},
                  {"force", vec3_json(r.sensed_force)},
                  {"mode", r.command.mode},
                  {"cmd", {r.command.twist.vx, r.command.twist.vy, r.command.twist.wz}},
                  {"coord", r.coordinate}});
  }

  BenchConfig config_;
  std::shared_ptr<const intent::RecurrentModel> model_;
  LiveOptions opt_;
  TaskSpec task_;
  std::optional<Simulation> sim_;
  std::optional<SettleMonitor> settle_;
  TrialLog log_;
  HandleWrench wrench_;
  std::optional<double> force_time_;
  std::optional<long> last_in_seq_;
  long out_seq_ = 0;
  bool connected_ = false;
  bool paused_ = true;
  bool finished_ = false;
  double disconnect_time_ = 0.0;
};

}  // namespace cobench::harness
