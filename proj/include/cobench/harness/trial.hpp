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

// One closed-loop trial: scripted (or replayed) leader, sensing chain,
// follower controller and board, stepped at a fixed rate.

#pragma once

#include "cobench/harness/config.hpp"
#include "cobench/intent/model_io.hpp"
#include "cobench/metrics.hpp"
#include "cobench/nnpc.hpp"
#include "cobench/signals.hpp"

#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace cobench::harness {

inline constexpr std::string_view kLogFormat = "cobench-trial-1";

struct StepRecord {
  long seq = 0;
  double t = 0.0;
  Pose2 pose;
  Twist2 twist;   // world
  Twist2 accel;   // world
  HandleWrench wrench;
  Vec3 sensed_force = Vec3::Zero();
  Vec3 sensed_torque = Vec3::Zero();
  double leader_tz = 0.0;  // handle torque about z, unfiltered
  double grasp_tz = 0.0;   // follower grasp torque about the centre
  double coordinate = 0.0;
  double tz_ref = 0.0;
  double tx_ref = 0.0;
  ControlCommand command;
  bool saturated = false;

  bool operator==(const StepRecord&) const = default;
};

struct TrialLog {
  Json header;
  std::vector<StepRecord> steps;
};

struct MetricsReport {
  std::string controller;
  TaskSpec task;
  std::uint64_t seed = 0;
  bool completed = false;
  bool timed_out = false;
  std::optional<double> completion_time;  // s; undefined without displacement
  double duration = 0.0;                  // s simulated
  double final_error = 0.0;               // task units
  double mje = 0.0;
  double mtm = 0.0;
  double torque_change = 0.0;
  double avg_lateral_speed = 0.0;
  double peak_lateral_speed = 0.0;
  double avg_yaw_rate = 0.0;
  double peak_yaw_rate = 0.0;
  double mean_interaction_force = 0.0;  // N
  double mean_external_force = 0.0;     // N
  double force_ratio = 0.0;             // interaction / external
  bool saturated = false;
  bool limits_respected = true;         // every command within vmax
};

/// Follower behind a single interface.
class Follower {
 public:
  Follower(const BenchConfig& c, std::shared_ptr<const intent::RecurrentModel> model)
      : impl_(make(c, std::move(model))) {}

  ControlCommand update(double t, const Pose2& pose, const SensedLoad& load, double dt) {
    return std::visit(
        [&](auto& ctl) -> ControlCommand {
          using T = std::decay_t<decltype(ctl)>;
          if constexpr (std::is_same_v<T, NnpcController>) return ctl.update(t, pose);
          else return ctl.update(load, dt);
        },
        impl_);
  }

 private:
  using Impl = std::variant<BmvicController, EvicController, NnpcController>;

  static Impl make(const BenchConfig& c, std::shared_ptr<const intent::RecurrentModel> model) {
    const auto& cc = c.controller;
    if (cc.type == "bmvic") return BmvicController(cc.vic, cc.limits);
    if (cc.type == "evic") return EvicController(cc.vic, cc.evic, cc.limits);
    if (!model) {
      require(!cc.model.empty(), "nnpc controller needs a model file");
      model = std::make_shared<const intent::RecurrentModel>(intent::load_model(cc.model));
    }
    return NnpcController(std::move(model), cc.nnpc, c.geometry, cc.limits);
  }

  Impl impl_;
};

/// Leader parameters and task after per-trial jitter drawn from `seed`.
inline std::pair<LeaderParams, TaskSpec> jittered_leader(const BenchConfig& c, const TaskSpec& task,
                                                         std::uint64_t seed) {
  LeaderParams p = c.leader_params();
  TaskSpec t = task;
  const LeaderJitter& j = c.leader.jitter;
  if (j.amplitude == 0.0 && j.timing == 0.0 && j.speed == 0.0) return {p, t};
  std::mt19937_64 rng(seed ^ 0x6a09e667f3bcc909ULL);
  auto draw = [&](double frac) { return 1.0 + frac * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0); };
  const double amp = draw(j.amplitude);
  const double tim = draw(j.timing);
  const double spd = draw(j.speed);
  p.triggers.tz_amplitude *= amp;
  p.triggers.tx_amplitude *= amp;
  p.triggers.rotation_tz_amplitude *= amp;
  p.triggers.tz_rise *= tim;
  p.triggers.tx_rise *= tim;
  p.triggers.tx_divergence *= tim;
  p.triggers.rotation_tz_hold = std::max(1.0, p.triggers.rotation_tz_hold * tim);
  t.cruise_speed = task.speed() * spd;
  t.accel = task.acceleration() * spd;
  return {p, t};
}

/// Handle wrenches recorded in an earlier log, one per step.
struct ReplayLeader {
  std::vector<HandleWrench> wrenches;
};

struct TrialResult {
  TrialLog log;
  MetricsReport report;
};

inline MetricsReport score_trial(const TrialLog& log, const TaskSpec& task, const TableGeometry& g,
                                 const VelocityLimits& limits, double dt);

/// Board, grasp, sensing chain and follower advanced one step at a time by
/// an external leader wrench. Shared by batch trials and live sessions.
class Simulation {
 public:
  Simulation(const BenchConfig& config, const TaskSpec& task, std::shared_ptr<const intent::RecurrentModel> model,
             std::uint64_t seed)
      : g_(config.geometry),
        dt_(config.dt),
        task_(task),
        grasp_(GraspCompliance::critically_damped(config.geometry, config.grasp.kxy, config.grasp.ktheta)),
        sensor_(config.geometry, config.sensor_noise, seed),
        follower_(config, std::move(model)) {
    grasp_.anchor = rest_anchor(task.start, g_);
    state_.pose = task.start;
  }

  /// Samples the sensors and runs the follower at the current time with
  /// leader wrench `w`; the board does not move until integrate().
  StepRecord observe(const HandleWrench& w) {
    const double t = static_cast<double>(n_) * dt_;
    StepRecord r;
    r.seq = n_;
    r.t = t;
    r.wrench = w;
    if (t + 1e-9 >= static_cast<double>(next_sample_) / kForceRateHz) {
      sensor_.sample(t, r.wrench);
      ++next_sample_;
    }
    const SensedLoad& load = sensor_.last();
    r.command = follower_.update(t, state_.pose, load, dt_);
    r.pose = state_.pose;
    r.twist = state_.twist;
    r.accel = state_.accel;
    r.sensed_force = load.force;
    r.sensed_torque = load.torque;
    r.leader_tz = board_torques(r.wrench, g_).z();
    grasp_.anchor_twist = {0.0, 0.0, r.command.twist.wz};
    const Vec2 v = rotate(Vec2(r.command.twist.vx, r.command.twist.vy), grasp_.anchor.theta);
    grasp_.anchor_twist.vx = v.x();
    grasp_.anchor_twist.vy = v.y();
    r.grasp_tz = grasp_wrench(state_, grasp_, g_).tz;
    r.coordinate = task_coordinate(task_, state_.pose);
    wrench_ = w;
    return r;
  }

  /// Integrates the board and the robot anchor over one step.
  void integrate() {
    state_ = step(state_, wrench_, grasp_, g_, dt_);
    grasp_.anchor.x += grasp_.anchor_twist.vx * dt_;
    grasp_.anchor.y += grasp_.anchor_twist.vy * dt_;
    grasp_.anchor.theta += grasp_.anchor_twist.wz * dt_;
    ++n_;
  }

  const TableState& state() const { return state_; }
  long steps() const { return n_; }
  double time() const { return static_cast<double>(n_) * dt_; }

 private:
  TableGeometry g_;
  double dt_;
  TaskSpec task_;
  GraspCompliance grasp_;
  TableState state_;
  LoadSensor sensor_;
  Follower follower_;
  HandleWrench wrench_;
  long n_ = 0;
  long next_sample_ = 0;
};

/// Tracks the settle condition: the task coordinate held inside the 5% band
/// around the target for the hold time, after the scripted end.
class SettleMonitor {
 public:
  SettleMonitor(const TaskSpec& task, double end_time, double hold)
      : target_(task.target()), band_(0.05 * std::abs(task.target())), has_span_(task.magnitude > 0.0),
        end_(end_time), hold_(hold) {}

  bool update(double t, double coordinate, double dt) {
    if (has_span_) {
      held_ = std::abs(coordinate - target_) <= band_ ? held_ + dt : 0.0;
      return t >= end_ && held_ >= hold_ - 1e-9;
    }
    return t >= end_ + hold_ - 1e-9;
  }

  bool has_span() const { return has_span_; }

 private:
  double target_, band_;
  bool has_span_;
  double end_, hold_;
  double held_ = 0.0;
};

/// Runs one task to its settle condition or the timeout.
inline TrialResult run_trial(const BenchConfig& config, const TaskSpec& task_in,
                             std::shared_ptr<const intent::RecurrentModel> model = nullptr,
                             const ReplayLeader* replay = nullptr) {
  config.validate();
  task_in.validate();
  require(config.leader.source != "live", "run_trial needs a scripted or replayed leader");
  require(config.leader.source != "replay" || replay != nullptr, "replay leader needs recorded wrenches");
  const std::uint64_t seed = config.seed.value_or(0);
  const TableGeometry& g = config.geometry;
  const double dt = config.dt;
  const auto [leader, task] = jittered_leader(config, task_in, seed);
  const TaskTiming tm = task_timing(task, leader.triggers);

  Simulation sim(config, task, std::move(model), seed);
  SettleMonitor settle(task, tm.end, config.settle_hold);

  TrialResult out;
  out.log.header = {{"format", kLogFormat},  {"controller", config.controller.type},
                    {"seed", seed},          {"dt", dt},
                    {"task", task_in},       {"leader_task", task},
                    {"leader", leader},      {"config", config}};

  const long max_steps = static_cast<long>(std::ceil(config.timeout / dt));
  bool settled = false;

  for (long n = 0; n <= max_steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    LeaderOutput lo;
    if (replay) {
      const auto k = static_cast<std::size_t>(n);
      lo.wrench = k < replay->wrenches.size() ? replay->wrenches[k] : HandleWrench{};
    } else {
      lo = leader_step(sim.state(), task, leader, g, t);
    }
    StepRecord r = sim.observe(lo.wrench);
    r.tz_ref = lo.tz_ref;
    r.tx_ref = lo.tx_ref;
    r.saturated = lo.saturated;
    out.log.steps.push_back(r);
    if (settle.update(t, r.coordinate, dt)) {
      settled = true;
      break;
    }
    if (n == max_steps) break;
    sim.integrate();
  }

  out.report = score_trial(out.log, task_in, g, config.controller.limits, dt);
  out.report.controller = config.controller.type;
  out.report.seed = seed;
  out.report.completed = settled && settle.has_span();
  out.report.timed_out = !settled;
  return out;
}

inline MetricsReport score_trial(const TrialLog& log, const TaskSpec& task, const TableGeometry& g,
                                 const VelocityLimits& limits, double dt) {
  require(!log.steps.empty(), "score_trial: empty log");
  MetricsReport m;
  m.task = task;
  const std::size_t n = log.steps.size();
  std::vector<double> t(n), x(n), tz(n), gz(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& r = log.steps[k];
    t[k] = r.t;
    x[k] = r.coordinate;
    tz[k] = r.leader_tz;
    gz[k] = r.grasp_tz;
    m.saturated = m.saturated || r.saturated;
    m.limits_respected = m.limits_respected && limits.contains(r.command.twist);
  }
  m.duration = t.back() - t.front();
  m.final_error = x.back() - task.target();
  m.completion_time = completion_time(t, x, 0.0, task.target());

  // Window of motion: first exit past 5% to last entry into 95%.
  std::size_t first = 0, last = n - 1;
  if (m.completion_time) {
    const double span = task.target();
    bool found = false, inside = false;
    for (std::size_t k = 0; k < n; ++k) {
      const double p = x[k] / span;
      if (!found && p > 0.05) {
        first = k;
        found = true;
      }
      if (p >= 0.95 && !inside) last = k;
      inside = p >= 0.95;
    }
    // Fit the quintic to the observed crossings: it passes 5% and 95% at
    // fractions 0.1893 and 0.8107 of its duration.
    constexpr double u5 = 0.18925537743777104, u95 = 0.8107446225622288;
    const double T = (t[last] - t[first]) / (u95 - u5);
    const double t0 = t[first] - u5 * T;
    const auto ideal = minimum_jerk_series(t, x.front(), x.back(), t0, t0 + T);
    m.mje = mje(x, ideal);
  } else {
    const auto ideal = minimum_jerk_series(t, x.front(), x.back(), t.front(), std::max(t.back(), t.front() + dt));
    m.mje = mje(x, ideal);
  }
  if (n >= 2) {
    m.mtm = mtm(tz, dt);
    m.torque_change = torque_change(tz, gz, dt);
  }

  double sum_v = 0.0, sum_w = 0.0, sum_fi = 0.0, sum_fe = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    const auto& r = log.steps[k];
    const Vec2 v = rotate(Vec2(r.twist.vx, r.twist.vy), -r.pose.theta);
    sum_v += std::abs(v.y());
    sum_w += std::abs(r.twist.wz);
    m.peak_lateral_speed = std::max(m.peak_lateral_speed, std::abs(v.y()));
    m.peak_yaw_rate = std::max(m.peak_yaw_rate, std::abs(r.twist.wz));
    const Vec2 f = leader_planar_force(r.wrench);
    const Vec2 a = rotate(Vec2(r.accel.vx, r.accel.vy), -r.pose.theta);
    const ForceSplit split = interaction_force(Vec3(f.x(), f.y(), 0.0), g, Vec3(a.x(), a.y(), 0.0));
    sum_fi += split.interaction.norm();
    sum_fe += split.external.norm();
  }
  const double cnt = static_cast<double>(last - first + 1);
  m.avg_lateral_speed = sum_v / cnt;
  m.avg_yaw_rate = sum_w / cnt;
  m.mean_interaction_force = sum_fi / cnt;
  m.mean_external_force = sum_fe / cnt;
  m.force_ratio = sum_fe > 0.0 ? sum_fi / sum_fe : 0.0;
  return m;
}

}  // namespace cobench::harness
