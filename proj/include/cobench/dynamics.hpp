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

// Planar rigid-body model of the carried board.
//
// Frames: the world frame is fixed with z up. The table frame sits at the
// board's centre of mass with x along the long edge pointing at the leader,
// y across the board, z up. The leader's handles are on the +x edge and the
// follower's grasp on the -x edge. The leader faces -x, so its left handle is
// at y = -w/2.
//
// Handle readings follow the force-sensor convention: each HandleWrench
// vector is the force the board exerts on the leader's hand, expressed in the
// table frame. The force the leader applies to the board is its negative,
// and board_torques() is then exactly the moment of the leader's load about
// the centre of mass.

#pragma once

#include "cobench/common.hpp"

#include <cmath>

namespace cobench {

inline constexpr double kGravity = 9.81;

struct TableGeometry {
  double mass = 10.3;     // kg
  double length = 1.22;   // m, along table x
  double width = 0.59;    // m, along table y
  double depth = 0.02;    // m, along table z

  // Rectangular prism inertia about the centre of mass.
  double ixx() const { return mass * (width * width + depth * depth) / 12.0; }
  double iyy() const { return mass * (length * length + depth * depth) / 12.0; }
  double izz() const { return mass * (length * length + width * width) / 12.0; }

  Vec2 left_handle() const { return {0.5 * length, -0.5 * width}; }
  Vec2 right_handle() const { return {0.5 * length, 0.5 * width}; }
  Vec2 left_grasp() const { return {-0.5 * length, -0.5 * width}; }
  Vec2 right_grasp() const { return {-0.5 * length, 0.5 * width}; }
  /// Midpoint of the two follower grasps; the robot frame origin.
  Vec2 follower_edge() const { return {-0.5 * length, 0.0}; }

  void validate() const {
    require(finite(mass) && mass > 0.0, "table mass must be positive");
    require(finite(length) && finite(width) && finite(depth), "table dimensions must be finite");
    require(length > width && width > depth && depth > 0.0, "table dimensions must satisfy l > w > d > 0");
  }

  bool operator==(const TableGeometry&) const = default;
};

/// Ground-truth board state in the world frame.
struct TableState {
  double t = 0.0;
  Pose2 pose;
  Twist2 twist;   // world-frame velocity, angular rate
  Twist2 accel;   // (ax, ay, alpha_z) from the last step

  bool operator==(const TableState&) const = default;
};

struct HandleWrench {
  Vec3 left = Vec3::Zero();
  Vec3 right = Vec3::Zero();

  bool operator==(const HandleWrench& o) const { return left == o.left && right == o.right; }
  bool finite() const { return left.allFinite() && right.allFinite(); }
};

/// Clamps every component to [-limit, limit]. Returns true when any component
/// was clipped.
inline bool saturate(HandleWrench& w, double limit) {
  bool clipped = false;
  for (Vec3* f : {&w.left, &w.right}) {
    for (int i = 0; i < 3; ++i) {
      const double c = clamp_abs((*f)[i], limit);
      clipped |= c != (*f)[i];
      (*f)[i] = c;
    }
  }
  return clipped;
}

/// Torque about the centre of mass produced by the leader's handle load.
inline Vec3 board_torques(const HandleWrench& w, const TableGeometry& g) {
  require(w.finite(), "board_torques: non-finite wrench");
  const Vec3& l = w.left;
  const Vec3& r = w.right;
  const double hw = 0.5 * g.width;
  const double hl = 0.5 * g.length;
  return {
      (l.z() - r.z()) * hw + (r.y() + l.y()) * g.depth,
      (r.z() + l.z()) * hl - (r.x() + l.x()) * g.depth,
      (r.x() - l.x()) * hw - (r.y() + l.y()) * hl,
  };
}

/// Planar force the leader applies to the board, table frame.
inline Vec2 leader_planar_force(const HandleWrench& w) {
  return -(w.left.head<2>() + w.right.head<2>());
}

/// Euler's rigid-body torque for a principal-axis prism.
inline Vec3 external_torque(const Vec3& omega, const Vec3& alpha, const TableGeometry& g) {
  require(omega.allFinite() && alpha.allFinite(), "external_torque: non-finite motion");
  const double ixx = g.ixx(), iyy = g.iyy(), izz = g.izz();
  return {
      ixx * alpha.x() - (iyy - izz) * omega.y() * omega.z(),
      iyy * alpha.y() - (izz - ixx) * omega.x() * omega.z(),
      izz * alpha.z() - (ixx - iyy) * omega.x() * omega.y(),
  };
}

/// Planar specialisation: omega_x = omega_y = 0 so only tau_z survives.
inline Vec3 external_torque(const TableState& s, const TableGeometry& g) {
  return external_torque(Vec3(0.0, 0.0, s.twist.wz), Vec3(0.0, 0.0, s.accel.wz), g);
}

/// Net planar load in the world frame.
struct PlanarWrench {
  double fx = 0.0;
  double fy = 0.0;
  double tz = 0.0;
};

/// Spring-damper coupling between the follower base and the board's -x edge.
/// Stiffness and damping act along the anchor's own axes.
struct GraspCompliance {
  Vec3 stiffness = Vec3::Zero();  // kx, ky [N/m], ktheta [N m/rad]
  Vec3 damping = Vec3::Zero();    // bx, by [N s/m], btheta [N m s/rad]
  Pose2 anchor;                   // robot frame pose, world
  Twist2 anchor_twist;            // world-frame velocity of the anchor

  /// Critical damping against the board's own mass and yaw inertia.
  static GraspCompliance critically_damped(const TableGeometry& g, double kxy = 300.0,
                                           double ktheta = 60.0) {
    GraspCompliance c;
    c.stiffness = {kxy, kxy, ktheta};
    const double bxy = 2.0 * std::sqrt(kxy * g.mass);
    c.damping = {bxy, bxy, 2.0 * std::sqrt(ktheta * g.izz())};
    return c;
  }

  void validate() const {
    require(stiffness.allFinite() && damping.allFinite(), "grasp gains must be finite");
    require((stiffness.array() >= 0.0).all() && (damping.array() >= 0.0).all(),
            "grasp stiffness and damping must be non-negative");
  }
};

/// Anchor pose that leaves the grasp unstretched for a given board pose.
inline Pose2 rest_anchor(const Pose2& board, const TableGeometry& g) {
  const Vec2 e = Vec2(board.x, board.y) + rotate(g.follower_edge(), board.theta);
  return {e.x(), e.y(), board.theta};
}

inline PlanarWrench grasp_wrench(const TableState& s, const GraspCompliance& c,
                                 const TableGeometry& g) {
  const Vec2 r = rotate(g.follower_edge(), s.pose.theta);
  const Vec2 edge = Vec2(s.pose.x, s.pose.y) + r;
  const Vec2 edge_vel = Vec2(s.twist.vx - s.twist.wz * r.y(), s.twist.vy + s.twist.wz * r.x());

  const Vec2 err = rotate(Vec2(c.anchor.x, c.anchor.y) - edge, -c.anchor.theta);
  const Vec2 derr = rotate(Vec2(c.anchor_twist.vx, c.anchor_twist.vy) - edge_vel, -c.anchor.theta);
  const Vec2 f_anchor(c.stiffness.x() * err.x() + c.damping.x() * derr.x(),
                      c.stiffness.y() * err.y() + c.damping.y() * derr.y());
  const Vec2 f = rotate(f_anchor, c.anchor.theta);

  PlanarWrench out;
  out.fx = f.x();
  out.fy = f.y();
  out.tz = r.x() * f.y() - r.y() * f.x() +
           c.stiffness.z() * wrap_angle(c.anchor.theta - s.pose.theta) +
           c.damping.z() * (c.anchor_twist.wz - s.twist.wz);
  return out;
}

/// Semi-implicit Euler on an explicitly supplied world-frame load.
inline TableState integrate(const TableState& s, const PlanarWrench& net, const TableGeometry& g,
                            double dt) {
  require(finite(dt) && dt > 0.0, "step: dt must be positive");
  TableState n = s;
  n.accel = {net.fx / g.mass, net.fy / g.mass, net.tz / g.izz()};
  n.twist.vx += n.accel.vx * dt;
  n.twist.vy += n.accel.vy * dt;
  n.twist.wz += n.accel.wz * dt;
  n.pose.x += n.twist.vx * dt;
  n.pose.y += n.twist.vy * dt;
  n.pose.theta += n.twist.wz * dt;
  n.t += dt;
  return n;
}

/// One fixed step of the board under the leader's handles and the follower's
/// grasp. Vertical handle components are sensed but do not move the board.
inline TableState step(const TableState& s, const HandleWrench& leader, const GraspCompliance& grasp,
                       const TableGeometry& g, double dt) {
  require(finite(dt) && dt > 0.0, "step: dt must be positive");
  const Vec2 f_leader = rotate(leader_planar_force(leader), s.pose.theta);
  const PlanarWrench gw = grasp_wrench(s, grasp, g);
  PlanarWrench net;
  net.fx = f_leader.x() + gw.fx;
  net.fy = f_leader.y() + gw.fy;
  net.tz = board_torques(leader, g).z() + gw.tz;
  return integrate(s, net, g, dt);
}

}  // namespace cobench
