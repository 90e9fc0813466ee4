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

// JSON mappings for the bench's value types. Missing keys keep defaults.

#pragma once

#include "cobench/controllers.hpp"
#include "cobench/dynamics.hpp"
#include "cobench/leader.hpp"
#include "cobench/nnpc.hpp"

#include <json.hpp>

#include <string>

namespace cobench {

using Json = nlohmann::json;

// Enums travel as their names; unknown names are rejected.
inline void to_json(Json& j, TaskKind v) { j = std::string(to_string(v)); }
inline void from_json(const Json& j, TaskKind& v) { v = task_kind_from_string(j.get<std::string>()); }
inline void to_json(Json& j, Direction v) { j = std::string(to_string(v)); }
inline void from_json(const Json& j, Direction& v) { v = direction_from_string(j.get<std::string>()); }
inline void to_json(Json& j, ReferenceProfile v) { j = std::string(to_string(v)); }
inline void from_json(const Json& j, ReferenceProfile& v) { v = profile_from_string(j.get<std::string>()); }
inline void to_json(Json& j, LeaderStyle v) { j = std::string(to_string(v)); }
inline void from_json(const Json& j, LeaderStyle& v) { v = leader_style_from_string(j.get<std::string>()); }
inline void to_json(Json& j, Mode v) { j = std::string(to_string(v)); }
inline void from_json(const Json& j, Mode& v) { v = mode_from_string(j.get<std::string>()); }

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Pose2, x, y, theta)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Twist2, vx, vy, wz)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TableGeometry, mass, length, width, depth)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VicParams, mass, damping, force_rate_gain, inertia, rot_damping,
                                                torque_rate_gain)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EvicParams, tz_threshold, tx_threshold, lateral_speed,
                                                rotation_speed, lateral_accel, rotation_accel, debounce)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VelocityLimits, vx, vy, wz)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(NnpcParams, horizon, prediction_index, replan_hz)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TriggerProfile, tz_amplitude, tz_rise, tx_amplitude, tx_divergence,
                                                tx_rise, rotation_tz_hold, rotation_tz_amplitude, release_lead)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LeaderGains, kp, kd, k_theta, d_theta)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LeaderParams, style, triggers, gains, anterior_bias, gravity_share,
                                                saturation)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TaskSpec, kind, direction, magnitude, duration, start, profile,
                                                cruise_speed, accel)

inline Json vec3_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

inline Vec3 vec3_from(const Json& j) {
  require(j.is_array() && j.size() == 3, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Json wrench_json(const HandleWrench& w) { return {{"left", vec3_json(w.left)}, {"right", vec3_json(w.right)}}; }

inline HandleWrench wrench_from(const Json& j) {
  HandleWrench w;
  w.left = vec3_from(j.at("left"));
  w.right = vec3_from(j.at("right"));
  return w;
}

}  // namespace cobench
