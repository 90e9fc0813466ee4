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

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cobench {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Raised whenever an input violates an operation's preconditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

inline bool finite(double v) { return std::isfinite(v); }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Planar pose (x, y, heading).
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  bool operator==(const Pose2&) const = default;
};

/// Planar twist (vx, vy, wz). The frame depends on context and is named at
/// every use site.
struct Twist2 {
  double vx = 0.0;
  double vy = 0.0;
  double wz = 0.0;

  bool operator==(const Twist2&) const = default;
};

inline bool all_finite(const Pose2& p) { return finite(p.x) && finite(p.y) && finite(p.theta); }
inline bool all_finite(const Twist2& t) { return finite(t.vx) && finite(t.vy) && finite(t.wz); }

/// Rotates a planar vector by `angle` radians.
inline Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a - std::numbers::pi;
}

inline double clamp_abs(double v, double limit) {
  return v > limit ? limit : (v < -limit ? -limit : v);
}

/// 3u^2 - 2u^3 on [0, 1], clamped outside.
inline double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * (3.0 - 2.0 * u);
}

}  // namespace cobench
