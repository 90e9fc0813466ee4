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

// Scripted human leader: task references, torque-trigger signatures and the
// handle-force synthesis that realises them.

#pragma once

#include "cobench/common.hpp"
#include "cobench/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>

namespace cobench {

enum class TaskKind { LateralTranslation, PlanarRotation, AnteriorTranslation };
enum class Direction { Left, Right, Clockwise, CounterClockwise, Forward, Backward };
enum class ReferenceProfile { Cruise, MinimumJerk };

inline std::string_view to_string(TaskKind k) {
  switch (k) {
    case TaskKind::LateralTranslation: return "lateral";
    case TaskKind::PlanarRotation: return "rotation";
    case TaskKind::AnteriorTranslation: return "anterior";
  }
  return "?";
}

inline std::string_view to_string(Direction d) {
  constexpr std::array<std::string_view, 6> names = {"left", "right", "cw", "ccw", "forward", "backward"};
  return names[static_cast<std::size_t>(d)];
}

inline std::string_view to_string(ReferenceProfile p) {
  return p == ReferenceProfile::Cruise ? "cruise" : "min_jerk";
}

inline TaskKind task_kind_from_string(std::string_view s) {
  for (auto k : {TaskKind::LateralTranslation, TaskKind::PlanarRotation, TaskKind::AnteriorTranslation})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown task kind: " + std::string(s));
}

inline Direction direction_from_string(std::string_view s) {
  for (int i = 0; i < 6; ++i)
    if (to_string(static_cast<Direction>(i)) == s) return static_cast<Direction>(i);
  throw ValidationError("unknown direction: " + std::string(s));
}

inline ReferenceProfile profile_from_string(std::string_view s) {
  if (s == "cruise") return ReferenceProfile::Cruise;
  if (s == "min_jerk") return ReferenceProfile::MinimumJerk;
  throw ValidationError("unknown reference profile: " + std::string(s));
}

struct TaskSpec {
  TaskKind kind = TaskKind::LateralTranslation;
  Direction direction = Direction::Left;
  double magnitude = 2.0;   // m or rad
  double duration = 6.0;    // s, nominal; the min-jerk profile uses it directly
  Pose2 start;
  ReferenceProfile profile = ReferenceProfile::Cruise;
  double cruise_speed = 0.0;  // 0 selects the per-kind default
  double accel = 0.0;         // 0 selects the per-kind default

  /// +1 or -1 along the task coordinate.
  double sign() const {
    switch (direction) {
      case Direction::Left:
      case Direction::Clockwise:
      case Direction::Backward: return -1.0;
      default: return 1.0;
    }
  }

  double speed() const {
    if (cruise_speed > 0.0) return cruise_speed;
    return kind == TaskKind::PlanarRotation ? 0.4 : 0.35;
  }

  double acceleration() const {
    if (accel > 0.0) return accel;
    return kind == TaskKind::PlanarRotation ? 0.6 : 0.5;
  }

  /// Signed end value of the task coordinate.
  double target() const { return sign() * magnitude; }

  /// Zero magnitude is accepted as a degenerate hold task; its completion
  /// time is undefined.
  void validate() const {
    require(finite(magnitude) && magnitude >= 0.0, "task magnitude must be non-negative");
    require(finite(duration) && duration > 0.0, "task duration must be positive");
    require(all_finite(start), "task start pose must be finite");
    require(finite(cruise_speed) && cruise_speed >= 0.0 && finite(accel) && accel >= 0.0,
            "task cruise speed and acceleration must be non-negative");
    const bool lateral = direction == Direction::Left || direction == Direction::Right;
    const bool rotary = direction == Direction::Clockwise || direction == Direction::CounterClockwise;
    switch (kind) {
      case TaskKind::LateralTranslation: require(lateral, "lateral task needs left/right"); break;
      case TaskKind::PlanarRotation: require(rotary, "rotation task needs cw/ccw"); break;
      case TaskKind::AnteriorTranslation: require(!lateral && !rotary, "anterior task needs forward/backward"); break;
    }
  }

  bool operator==(const TaskSpec&) const = default;
};

/// Quintic point-to-point profile.
inline double minimum_jerk(double x0, double xf, double t, double t0, double tf) {
  require(tf > t0, "minimum_jerk: tf must exceed t0");
  const double u = std::clamp((t - t0) / (tf - t0), 0.0, 1.0);
  const double u3 = u * u * u;
  return x0 + (xf - x0) * (10.0 * u3 - 15.0 * u3 * u + 6.0 * u3 * u * u);
}

inline double minimum_jerk_velocity(double x0, double xf, double t, double t0, double tf) {
  require(tf > t0, "minimum_jerk: tf must exceed t0");
  const double T = tf - t0;
  const double u = (t - t0) / T;
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double u2 = u * u;
  return (xf - x0) * (30.0 * u2 - 60.0 * u2 * u + 30.0 * u2 * u2) / T;
}

/// Shapes of the leader's torque signals. Amplitudes are chosen to clear the
/// EVIC thresholds (3.0 / 1.5 N m) with the same margin on both axes.
struct TriggerProfile {
  double tz_amplitude = 4.0;           // N m, translation
  double tz_rise = 0.5;                // s
  double tx_amplitude = 2.0;           // N m
  double tx_divergence = 0.75;         // s, rotation: tau_x splits by direction here
  double tx_rise = 0.5;                // s
  double rotation_tz_hold = 1.0;       // s tau_z stays flat on rotation tasks
  double rotation_tz_amplitude = 1.0;  // N m, below the tau_z threshold
  double release_lead = 0.25;          // s before the reference starts braking

  void validate() const {
    require(tz_amplitude > 0.0 && tx_amplitude > 0.0, "trigger amplitudes must be positive");
    require(tz_rise > 0.0 && tx_rise > 0.0, "trigger rise times must be positive");
    require(tx_divergence >= 0.0 && rotation_tz_hold >= 1.0, "rotation profiles must hold tau_z for >= 1 s");
    require(rotation_tz_amplitude >= 0.0 && release_lead >= 0.0, "bad rotation amplitude or release lead");
  }

  bool operator==(const TriggerProfile&) const = default;
};

/// Phase times of a scripted task.
struct TaskTiming {
  double onset = 0.0;        // reference motion starts
  double brake = 0.0;        // reference starts decelerating
  double end = 0.0;          // reference reaches the target
  double release = 0.0;      // trigger torques start to fall
};

inline TaskTiming task_timing(const TaskSpec& task, const TriggerProfile& p) {
  TaskTiming tm;
  tm.onset = task.kind == TaskKind::PlanarRotation ? p.tx_divergence + p.tx_rise : p.tz_rise;
  if (task.profile == ReferenceProfile::MinimumJerk) {
    tm.end = tm.onset + task.duration;
    tm.brake = tm.onset + 0.5 * task.duration;
  } else {
    const double v = task.speed();
    const double a = task.acceleration();
    const double m = task.magnitude;
    if (m >= v * v / a) {
      const double t_acc = v / a;
      const double t_cruise = (m - v * v / a) / v;
      tm.brake = tm.onset + t_acc + t_cruise;
      tm.end = tm.brake + t_acc;
    } else {
      const double t_acc = std::sqrt(m / a);
      tm.brake = tm.onset + t_acc;
      tm.end = tm.brake + t_acc;
    }
  }
  tm.release = std::max(tm.onset, tm.brake - p.release_lead);
  return tm;
}

/// Position and rate along the task coordinate (0 -> magnitude).
inline std::pair<double, double> reference_progress(const TaskSpec& task, const TaskTiming& tm, double t) {
  const double m = task.magnitude;
  if (t <= tm.onset || m == 0.0) return {0.0, 0.0};
  if (t >= tm.end) return {m, 0.0};
  if (task.profile == ReferenceProfile::MinimumJerk)
    return {minimum_jerk(0.0, m, t, tm.onset, tm.end), minimum_jerk_velocity(0.0, m, t, tm.onset, tm.end)};
  const double a = task.acceleration();
  const double t_acc = tm.end - tm.brake;
  const double v_peak = a * t_acc;
  const double tau = t - tm.onset;
  if (tau < t_acc) return {0.5 * a * tau * tau, a * tau};
  if (t < tm.brake) return {0.5 * a * t_acc * t_acc + v_peak * (tau - t_acc), v_peak};
  const double rem = tm.end - t;
  return {m - 0.5 * a * rem * rem, a * rem};
}

struct Reference {
  Pose2 pose;     // world
  Twist2 twist;   // world
};

/// Board-centre reference. Rotations pivot about the follower edge.
inline Reference task_reference(const TaskSpec& task, const TaskTiming& tm, const TableGeometry& g, double t) {
  const auto [s, ds] = reference_progress(task, tm, t);
  const double sg = task.sign();
  const Pose2& p0 = task.start;
  Reference r;
  switch (task.kind) {
    case TaskKind::LateralTranslation:
    case TaskKind::AnteriorTranslation: {
      const Vec2 axis = task.kind == TaskKind::LateralTranslation ? rotate(Vec2(0, 1), p0.theta)
                                                                   : rotate(Vec2(1, 0), p0.theta);
      r.pose = {p0.x + sg * s * axis.x(), p0.y + sg * s * axis.y(), p0.theta};
      r.twist = {sg * ds * axis.x(), sg * ds * axis.y(), 0.0};
      break;
    }
    case TaskKind::PlanarRotation: {
      const Vec2 pivot = Vec2(p0.x, p0.y) + rotate(g.follower_edge(), p0.theta);
      const double th = p0.theta + sg * s;
      const double w = sg * ds;
      const Vec2 arm = rotate(Vec2(0.5 * g.length, 0.0), th);
      r.pose = {pivot.x() + arm.x(), pivot.y() + arm.y(), th};
      r.twist = {-w * arm.y(), w * arm.x(), w};
      break;
    }
  }
  return r;
}

/// Signed progress of a board pose along the task coordinate.
inline double task_coordinate(const TaskSpec& task, const Pose2& pose) {
  const Pose2& p0 = task.start;
  const Vec2 d(pose.x - p0.x, pose.y - p0.y);
  switch (task.kind) {
    case TaskKind::LateralTranslation: return d.dot(rotate(Vec2(0, 1), p0.theta));
    case TaskKind::AnteriorTranslation: return d.dot(rotate(Vec2(1, 0), p0.theta));
    case TaskKind::PlanarRotation: return pose.theta - p0.theta;
  }
  return 0.0;
}

/// Reference (tau_z, tau_x) the leader expresses through the handles.
/// Translations ramp both torques together; rotations hold tau_z flat for at
/// least a second while tau_x splits by direction. Both fall back to zero
/// after the task's release time.
inline std::pair<double, double> trigger_torques(const TriggerProfile& p, const TaskSpec& task, double t) {
  if (t <= 0.0 || task.magnitude == 0.0) return {0.0, 0.0};
  const TaskTiming tm = task_timing(task, p);
  const double fall = 1.0 - smoothstep((t - tm.release) / std::max(p.tz_rise, p.tx_rise));
  const double sg = task.sign();
  switch (task.kind) {
    case TaskKind::LateralTranslation: {
      const double up = smoothstep(t / p.tz_rise);
      // Left translation: negative tau_z, positive tau_x.
      return {sg * p.tz_amplitude * up * fall, -sg * p.tx_amplitude * up * fall};
    }
    case TaskKind::PlanarRotation: {
      const double up_z = smoothstep((t - p.rotation_tz_hold) / p.tz_rise);
      const double up_x = smoothstep((t - p.tx_divergence) / p.tx_rise);
      // Counter-clockwise (right rotation): positive tau_x.
      return {sg * p.rotation_tz_amplitude * up_z * fall, sg * p.tx_amplitude * up_x * fall};
    }
    case TaskKind::AnteriorTranslation: return {0.0, 0.0};
  }
  return {0.0, 0.0};
}

enum class LeaderStyle {
  TorqueTriggers,  // signals intent with tau_z / tau_x patterns
  MotionLed,       // steers the board by position and heading only
};

inline std::string_view to_string(LeaderStyle s) {
  return s == LeaderStyle::TorqueTriggers ? "triggers" : "motion";
}

inline LeaderStyle leader_style_from_string(std::string_view s) {
  if (s == "triggers") return LeaderStyle::TorqueTriggers;
  if (s == "motion") return LeaderStyle::MotionLed;
  throw ValidationError("unknown leader style: " + std::string(s));
}

struct LeaderGains {
  double kp = 60.0;       // N/m
  double kd = 25.0;       // N s/m
  double k_theta = 0.0;   // N m/rad
  double d_theta = 0.0;   // N m s/rad

  bool operator==(const LeaderGains&) const = default;
};

struct LeaderParams {
  LeaderStyle style = LeaderStyle::TorqueTriggers;
  TriggerProfile triggers;
  LeaderGains gains;
  double anterior_bias = 2.0;    // N pushing the board toward the follower
  double gravity_share = 0.5;    // fraction of the board weight on the leader
  double saturation = 200.0;     // N per axis

  void validate() const {
    triggers.validate();
    require(gains.kp >= 0 && gains.kd >= 0 && gains.k_theta >= 0 && gains.d_theta >= 0,
            "leader gains must be non-negative");
    require(finite(anterior_bias), "anterior bias must be finite");
    require(gravity_share >= 0.0 && gravity_share <= 1.0, "gravity share must be in [0, 1]");
    require(saturation > 0.0, "saturation must be positive");
  }

  bool operator==(const LeaderParams&) const = default;
};

/// Desired centre-of-mass load, table frame.
struct LeaderDemand {
  Vec2 force = Vec2::Zero();  // force on the board
  double tz = 0.0;
  double tx = 0.0;
};

/// Handle readings that realise a desired load exactly: the planar force is
/// split evenly, the x-force differential carries tau_z and the z-force
/// differential carries tau_x on top of the supported weight.
inline HandleWrench distribute_load(const LeaderDemand& d, const TableGeometry& g, double gravity_share) {
  const double sum_x = -d.force.x();
  const double sum_y = -d.force.y();
  const double diff_x = (d.tz + sum_y * 0.5 * g.length) * 2.0 / g.width;   // F_r,x - F_l,x
  const double sum_z = -gravity_share * g.mass * kGravity;
  const double diff_z = (d.tx - sum_y * g.depth) * 2.0 / g.width;          // F_l,z - F_r,z
  HandleWrench w;
  w.left = {0.5 * (sum_x - diff_x), 0.5 * sum_y, 0.5 * (sum_z + diff_z)};
  w.right = {0.5 * (sum_x + diff_x), 0.5 * sum_y, 0.5 * (sum_z - diff_z)};
  return w;
}

struct LeaderOutput {
  HandleWrench wrench;
  double tz_ref = 0.0;
  double tx_ref = 0.0;
  bool saturated = false;
};

/// Handle forces for one step of a scripted task.
inline LeaderOutput leader_step(const TableState& s, const TaskSpec& task, const LeaderParams& params,
                                const TableGeometry& g, double t) {
  const TaskTiming tm = task_timing(task, params.triggers);
  const Reference ref = task_reference(task, tm, g, t);
  const LeaderGains& k = params.gains;

  const Vec2 f_world(k.kp * (ref.pose.x - s.pose.x) + k.kd * (ref.twist.vx - s.twist.vx),
                     k.kp * (ref.pose.y - s.pose.y) + k.kd * (ref.twist.vy - s.twist.vy));
  LeaderDemand d;
  d.force = rotate(f_world, -s.pose.theta) + Vec2(-params.anterior_bias, 0.0);
  d.tz = k.k_theta * wrap_angle(ref.pose.theta - s.pose.theta) + k.d_theta * (ref.twist.wz - s.twist.wz);

  LeaderOutput out;
  if (params.style == LeaderStyle::TorqueTriggers) {
    std::tie(out.tz_ref, out.tx_ref) = trigger_torques(params.triggers, task, t);
    d.tz += out.tz_ref;
    d.tx = out.tx_ref;
  }
  out.wrench = distribute_load(d, g, params.gravity_share);
  out.saturated = saturate(out.wrench, params.saturation);
  return out;
}

}  // namespace cobench
