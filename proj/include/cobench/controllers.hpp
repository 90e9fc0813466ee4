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

// Follower control laws. Each maps the sensed load (and, for the predictive
// controller, the board's motion) to a planar twist for the mobile base.
// Commands are expressed in the robot frame, which sits at the follower edge
// of the board and is aligned with the table frame.

#pragma once

#include "cobench/common.hpp"
#include "cobench/dynamics.hpp"
#include "cobench/signals.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace cobench {

enum class Mode {
  LeftTranslation,
  RightTranslation,
  LeftRotation,
  RightRotation,
  Stop,
  Anterior,
  Bmvic,
  Nnpc,
};

inline constexpr std::array<std::string_view, 8> kModeNames = {
    "LeftTranslation", "RightTranslation", "LeftRotation", "RightRotation",
    "Stop",            "Anterior",         "Bmvic",        "Nnpc",
};

inline std::string_view to_string(Mode m) { return kModeNames[static_cast<std::size_t>(m)]; }

inline Mode mode_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i)
    if (kModeNames[i] == s) return static_cast<Mode>(i);
  throw ValidationError("unknown mode: " + std::string(s));
}

/// Virtual admittance parameters for the force (m, c, alpha) and torque
/// (I, b, beta) models.
struct VicParams {
  double mass = 1.2;
  double damping = 0.6;
  double force_rate_gain = 0.2;
  double inertia = 0.12;
  double rot_damping = 0.6;
  double torque_rate_gain = 0.2;

  void validate() const {
    require(mass > 0.0 && inertia > 0.0, "virtual mass and inertia must be positive");
    require(damping > 0.0 && rot_damping > 0.0, "virtual damping must be positive");
    require(force_rate_gain >= 0.0 && torque_rate_gain >= 0.0, "rate weightings must be non-negative");
  }

  bool operator==(const VicParams&) const = default;
};

struct EvicParams {
  double tz_threshold = 3.0;       // N m
  double tx_threshold = 1.5;       // N m
  double lateral_speed = 0.35;     // m/s
  double rotation_speed = 0.4;     // rad/s
  double lateral_accel = 0.5;      // m/s^2
  double rotation_accel = 0.6;     // rad/s^2
  double debounce = 0.1;           // s a new classification must persist

  void validate() const {
    require(tz_threshold > 0.0 && tx_threshold > 0.0, "EVIC thresholds must be positive");
    require(lateral_speed > 0.0 && rotation_speed > 0.0, "EVIC target speeds must be positive");
    require(lateral_accel > 0.0 && rotation_accel > 0.0, "EVIC acceleration limits must be positive");
    require(debounce >= 0.0, "EVIC debounce must be non-negative");
  }

  bool operator==(const EvicParams&) const = default;
};

/// Per-axis command bounds.
struct VelocityLimits {
  double vx = 0.5;   // m/s
  double vy = 0.45;  // m/s
  double wz = 0.5;   // rad/s

  void validate() const { require(vx > 0.0 && vy > 0.0 && wz > 0.0, "velocity limits must be positive"); }

  Twist2 clamp(const Twist2& t) const {
    return {clamp_abs(t.vx, vx), clamp_abs(t.vy, vy), clamp_abs(t.wz, wz)};
  }

  bool contains(const Twist2& t) const {
    return std::abs(t.vx) <= vx && std::abs(t.vy) <= vy && std::abs(t.wz) <= wz;
  }

  bool operator==(const VelocityLimits&) const = default;
};

struct ControlCommand {
  Twist2 twist;  // robot frame
  Mode mode = Mode::Stop;

  bool operator==(const ControlCommand&) const = default;
};

/// One explicit-Euler step of the variable admittance model
///   F = m a + c v - alpha Fdot v
/// solved for the acceleration. Returns nullopt on non-finite input.
inline std::optional<double> bmvic_step(double force, double force_rate, double velocity, double mass,
                                        double damping, double rate_gain, double dt) {
  require(finite(dt) && dt > 0.0, "bmvic_step: dt must be positive");
  if (!finite(force) || !finite(force_rate) || !finite(velocity)) return std::nullopt;
  const double accel = (force - damping * velocity + rate_gain * force_rate * velocity) / mass;
  return velocity + accel * dt;
}

inline std::optional<double> bmvic_translation_step(double f, double fdot, double v, const VicParams& p,
                                                    double dt) {
  return bmvic_step(f, fdot, v, p.mass, p.damping, p.force_rate_gain, dt);
}

inline std::optional<double> bmvic_rotation_step(double tau, double taudot, double w, const VicParams& p,
                                                 double dt) {
  return bmvic_step(tau, taudot, w, p.inertia, p.rot_damping, p.torque_rate_gain, dt);
}

/// The five-way torque trigger rule.
inline Mode evic_classify(double tz, double tx, const EvicParams& p) {
  const double zt = p.tz_threshold;
  const double xt = p.tx_threshold;
  if (tz <= -zt && tx >= xt) return Mode::LeftTranslation;
  if (std::abs(tz) <= zt && tx >= xt) return Mode::RightRotation;
  if (std::abs(tz) <= zt && tx <= -xt) return Mode::LeftRotation;
  if (tz >= zt && tx <= -xt) return Mode::RightTranslation;
  return Mode::Stop;
}

/// Moves `current` toward `target` by at most `rate * dt`.
inline double ramp_toward(double current, double target, double rate, double dt) {
  const double step = rate * dt;
  if (target > current) return std::min(target, current + step);
  return std::max(target, current - step);
}

/// Lateral and yaw targets for a trigger mode.
inline Twist2 evic_targets(Mode m, const EvicParams& p) {
  switch (m) {
    case Mode::LeftTranslation: return {0.0, -p.lateral_speed, 0.0};
    case Mode::RightTranslation: return {0.0, p.lateral_speed, 0.0};
    case Mode::LeftRotation: return {0.0, 0.0, -p.rotation_speed};
    case Mode::RightRotation: return {0.0, 0.0, p.rotation_speed};
    default: return {};
  }
}

/// v_r = v_rel + w x p for a planar twist; frames do not rotate relative to
/// each other so no extra rotation is needed.
inline Twist2 transport_velocity(const Twist2& rel, const Vec2& p) {
  require(all_finite(rel) && p.allFinite(), "transport_velocity: non-finite input");
  return {rel.vx - rel.wz * p.y(), rel.vy + rel.wz * p.x(), rel.wz};
}

/// Maps a predicted centre-of-mass twist (table frame) to a base command.
/// No prediction means the window is still cold: stop.
inline ControlCommand nnpc_step(const std::optional<Twist2>& prediction, const TableGeometry& g,
                                const VelocityLimits& limits) {
  if (!prediction || !all_finite(*prediction)) return {{}, Mode::Stop};
  return {limits.clamp(transport_velocity(*prediction, g.follower_edge())), Mode::Nnpc};
}

/// Force admittance on the anterior and lateral axes plus the torque model
/// for yaw.
class BmvicController {
 public:
  BmvicController(const VicParams& params, const VelocityLimits& limits) : params_(params), limits_(limits) {
    params_.validate();
    limits_.validate();
  }

  ControlCommand update(const SensedLoad& load, double dt) {
    const auto vx = bmvic_translation_step(load.force.x(), load.force_rate.x(), twist_.vx, params_, dt);
    const auto vy = bmvic_translation_step(load.force.y(), load.force_rate.y(), twist_.vy, params_, dt);
    const auto wz = bmvic_rotation_step(load.torque.z(), load.torque_rate.z(), twist_.wz, params_, dt);
    if (!vx || !vy || !wz) {
      twist_ = {};
      return {{}, Mode::Stop};
    }
    twist_ = limits_.clamp({*vx, *vy, *wz});
    return {twist_, Mode::Bmvic};
  }

  void reset() { twist_ = {}; }

 private:
  VicParams params_;
  VelocityLimits limits_;
  Twist2 twist_;
};

/// Anterior admittance plus torque-triggered lateral/yaw velocity ramps.
class EvicController {
 public:
  EvicController(const VicParams& vic, const EvicParams& evic, const VelocityLimits& limits)
      : vic_(vic), evic_(evic), limits_(limits) {
    vic_.validate();
    evic_.validate();
    limits_.validate();
  }

  ControlCommand update(const SensedLoad& load, double dt) {
    require(finite(dt) && dt > 0.0, "EvicController: dt must be positive");
    if (!load.force.allFinite() || !load.torque.allFinite() || !load.force_rate.allFinite()) {
      twist_ = {};
      mode_ = Mode::Stop;
      return {{}, Mode::Stop};
    }

    const Mode raw = evic_classify(load.torque.z(), load.torque.x(), evic_);
    if (raw == mode_) {
      pending_time_ = 0.0;
    } else if (raw == pending_) {
      pending_time_ += dt;
    } else {
      pending_ = raw;
      pending_time_ = dt;
    }
    if (raw != mode_ && pending_time_ >= evic_.debounce - 1e-12) {
      mode_ = raw;
      pending_time_ = 0.0;
    }

    const auto vx = bmvic_translation_step(load.force.x(), load.force_rate.x(), twist_.vx, vic_, dt);
    const Twist2 target = evic_targets(mode_, evic_);
    Twist2 next;
    next.vx = vx ? *vx : 0.0;
    next.vy = ramp_toward(twist_.vy, target.vy, evic_.lateral_accel, dt);
    next.wz = ramp_toward(twist_.wz, target.wz, evic_.rotation_accel, dt);
    twist_ = limits_.clamp(next);
    return {twist_, mode_};
  }

  Mode mode() const { return mode_; }
  const Twist2& twist() const { return twist_; }

 private:
  VicParams vic_;
  EvicParams evic_;
  VelocityLimits limits_;
  Twist2 twist_;
  Mode mode_ = Mode::Stop;
  Mode pending_ = Mode::Stop;
  double pending_time_ = 0.0;
};

}  // namespace cobench
