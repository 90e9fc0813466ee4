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


#include "cobench/leader.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

namespace cobench {
namespace {

TaskSpec lateral_left(double m = 2.0) {
  TaskSpec t;
  t.kind = TaskKind::LateralTranslation;
  t.direction = Direction::Left;
  t.magnitude = m;
  return t;
}

TaskSpec rotation(Direction d, double m = std::numbers::pi / 2) {
  TaskSpec t;
  t.kind = TaskKind::PlanarRotation;
  t.direction = d;
  t.magnitude = m;
  return t;
}

TEST(MinimumJerk, Boundaries) {
  EXPECT_EQ(minimum_jerk(0.3, 2.3, 1.0, 1.0, 6.0), 0.3);
  EXPECT_EQ(minimum_jerk(0.3, 2.3, 6.0, 1.0, 6.0), 2.3);
}

TEST(MinimumJerk, MidpointExact) {
  EXPECT_EQ(minimum_jerk(-1.0, 3.0, 3.5, 1.0, 6.0), 1.0);
  EXPECT_EQ(minimum_jerk(0.0, 2.0, 2.5, 0.0, 5.0), 1.0);
}

TEST(MinimumJerk, RejectsEmptyInterval) {
  EXPECT_THROW(minimum_jerk(0, 1, 0, 2.0, 2.0), ValidationError);
  EXPECT_THROW(minimum_jerk(0, 1, 0, 2.0, 1.0), ValidationError);
}

TEST(MinimumJerk, FlatEndpoints) {
  const double t0 = 0.0, tf = 5.0, h = 1e-4;
  auto x = [&](double t) { return minimum_jerk(0.0, 2.0, t, t0, tf); };
  const double peak_v = 2.0 * 1.875 / 5.0;
  const double peak_a = 2.0 * 5.7735 / 25.0;
  auto v = [&](double t) { return minimum_jerk_velocity(0.0, 2.0, t, t0, tf); };
  for (double t : {t0, tf}) {
    // One-sided stencils stay inside the interval.
    const double s = t == t0 ? 1.0 : -1.0;
    const double vel = s * (-3 * x(t) + 4 * x(t + s * h) - x(t + 2 * s * h)) / (2 * h);
    const double acc = s * (-3 * v(t) + 4 * v(t + s * h) - v(t + 2 * s * h)) / (2 * h);
    EXPECT_LT(std::abs(vel), 1e-6 * peak_v);
    EXPECT_LT(std::abs(acc), 1e-6 * peak_a);
  }
  EXPECT_EQ(minimum_jerk_velocity(0.0, 2.0, t0, t0, tf), 0.0);
  EXPECT_EQ(minimum_jerk_velocity(0.0, 2.0, tf, t0, tf), 0.0);
}

TEST(MinimumJerk, BellShapedVelocity) {
  double best = -1.0, best_t = -1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double t = 5.0 * k / 1000.0;
    const double v = minimum_jerk_velocity(0.0, 2.0, t, 0.0, 5.0);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  EXPECT_DOUBLE_EQ(best_t, 2.5);
  EXPECT_NEAR(best, 2.0 * 1.875 / 5.0, 1e-12);
  // Rises then falls.
  for (int k = 1; k <= 500; ++k)
    EXPECT_GE(minimum_jerk_velocity(0, 2, 0.005 * k, 0, 5), minimum_jerk_velocity(0, 2, 0.005 * (k - 1), 0, 5));
}

TEST(Triggers, StartAtRest) {
  TriggerProfile p;
  for (const auto& t : {lateral_left(), rotation(Direction::Clockwise), rotation(Direction::CounterClockwise)}) {
    const auto [tz, tx] = trigger_torques(p, t, 0.0);
    EXPECT_EQ(tz, 0.0);
    EXPECT_EQ(tx, 0.0);
  }
}

TEST(Triggers, LeftTranslationAtRiseTime) {
  TriggerProfile p;
  const auto [tz, tx] = trigger_torques(p, lateral_left(), p.tz_rise);
  EXPECT_DOUBLE_EQ(tz, -4.0);
  EXPECT_DOUBLE_EQ(tx, 2.0);
}

TEST(Triggers, RightTranslationMirrors) {
  TriggerProfile p;
  TaskSpec t = lateral_left();
  t.direction = Direction::Right;
  const auto [tz, tx] = trigger_torques(p, t, p.tz_rise);
  EXPECT_DOUBLE_EQ(tz, 4.0);
  EXPECT_DOUBLE_EQ(tx, -2.0);
}

TEST(Triggers, RotationHoldsYawFlat) {
  TriggerProfile p;
  for (double t = 0.0; t <= 1.0; t += 0.01) {
    EXPECT_LE(std::abs(trigger_torques(p, rotation(Direction::CounterClockwise), t).first), 0.2);
    EXPECT_LE(std::abs(trigger_torques(p, rotation(Direction::Clockwise), t).first), 0.2);
  }
  EXPECT_LE(std::abs(trigger_torques(p, rotation(Direction::Clockwise), 0.5).first), 0.2);
}

TEST(Triggers, RotationRollDivergesByDirection) {
  TriggerProfile p;
  const double t = p.tx_divergence + p.tx_rise;
  EXPECT_DOUBLE_EQ(trigger_torques(p, rotation(Direction::CounterClockwise), t).second, 2.0);
  EXPECT_DOUBLE_EQ(trigger_torques(p, rotation(Direction::Clockwise), t).second, -2.0);
  EXPECT_EQ(trigger_torques(p, rotation(Direction::Clockwise), p.tx_divergence).second, 0.0);
}

TEST(Triggers, AmplitudesClearEvicThresholds) {
  TriggerProfile p;
  EXPECT_GT(p.tz_amplitude, 3.0);
  EXPECT_GT(p.tx_amplitude, 1.5);
  EXPECT_LT(p.rotation_tz_amplitude, 3.0);
  p.rotation_tz_hold = 0.5;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Triggers, ReleaseBeforeEnd) {
  TriggerProfile p;
  const TaskSpec task = lateral_left();
  const TaskTiming tm = task_timing(task, p);
  const auto [tz, tx] = trigger_torques(p, task, tm.end + 1.0);
  EXPECT_EQ(tz, 0.0);
  EXPECT_EQ(tx, 0.0);
}

TEST(Timing, CruiseProfileDurations) {
  TriggerProfile p;
  const TaskTiming tm = task_timing(lateral_left(2.0), p);
  // 0.7 s to reach 0.35 m/s at 0.5 m/s^2, (2 - 0.245) / 0.35 s cruising.
  EXPECT_NEAR(tm.onset, 0.5, 1e-12);
  EXPECT_NEAR(tm.brake - tm.onset, 0.7 + (2.0 - 0.245) / 0.35, 1e-12);
  EXPECT_NEAR(tm.end - tm.brake, 0.7, 1e-12);
  const auto [s, ds] = reference_progress(lateral_left(2.0), tm, tm.end);
  EXPECT_DOUBLE_EQ(s, 2.0);
  EXPECT_EQ(ds, 0.0);
}

TEST(Timing, ShortTaskNeverCruises) {
  TriggerProfile p;
  const TaskSpec t = lateral_left(0.1);
  const TaskTiming tm = task_timing(t, p);
  EXPECT_NEAR(tm.end - tm.onset, 2.0 * std::sqrt(0.1 / 0.5), 1e-12);
  const auto [s, ds] = reference_progress(t, tm, 0.5 * (tm.onset + tm.end));
  EXPECT_NEAR(s, 0.05, 1e-12);
  EXPECT_LE(ds, 0.35);
}

TEST(Timing, MinimumJerkProfileUsesDuration) {
  TaskSpec t = lateral_left(1.0);
  t.profile = ReferenceProfile::MinimumJerk;
  t.duration = 4.0;
  const TaskTiming tm = task_timing(t, TriggerProfile{});
  EXPECT_DOUBLE_EQ(tm.end - tm.onset, 4.0);
  EXPECT_DOUBLE_EQ(reference_progress(t, tm, tm.onset + 2.0).first, 0.5);
}

TEST(Reference, RotationPivotsAboutFollowerEdge) {
  TableGeometry g;
  const TaskSpec t = rotation(Direction::CounterClockwise);
  const TaskTiming tm = task_timing(t, TriggerProfile{});
  const Reference r = task_reference(t, tm, g, tm.end);
  EXPECT_NEAR(r.pose.theta, std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(r.pose.x, -0.61, 1e-12);
  EXPECT_NEAR(r.pose.y, 0.61, 1e-12);
  EXPECT_NEAR(task_coordinate(t, r.pose), std::numbers::pi / 2, 1e-12);
}

TEST(TaskSpec, Validation) {
  TaskSpec t = lateral_left();
  t.direction = Direction::Clockwise;
  EXPECT_THROW(t.validate(), ValidationError);
  t = lateral_left();
  t.magnitude = -1.0;
  EXPECT_THROW(t.validate(), ValidationError);
  t = lateral_left();
  t.duration = 0.0;
  EXPECT_THROW(t.validate(), ValidationError);
  t = lateral_left(0.0);
  EXPECT_NO_THROW(t.validate());
  EXPECT_EQ(lateral_left().target(), -2.0);
}

TEST(DistributeLoad, PureYawDemand) {
  LeaderDemand d;
  d.tz = -0.59;
  const HandleWrench w = distribute_load(d, TableGeometry{}, 0.0);
  EXPECT_NEAR(w.left.x(), 1.0, 1e-15);
  EXPECT_NEAR(w.right.x(), -1.0, 1e-15);
  EXPECT_EQ(w.left.y(), 0.0);
  EXPECT_EQ(w.right.y(), 0.0);
}

TEST(DistributeLoad, RealisesDemandExactly) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 10.0);
  TableGeometry g;
  for (int i = 0; i < 500; ++i) {
    LeaderDemand d;
    d.force = {n(rng), n(rng)};
    d.tz = n(rng);
    d.tx = n(rng);
    const HandleWrench w = distribute_load(d, g, 0.5);
    const Vec3 tau = board_torques(w, g);
    EXPECT_NEAR(tau.z(), d.tz, 1e-10);
    EXPECT_NEAR(tau.x(), d.tx, 1e-10);
    EXPECT_LT((leader_planar_force(w) - d.force).norm(), 1e-10);
    EXPECT_NEAR(w.left.z() + w.right.z(), -0.5 * g.mass * kGravity, 1e-10);
  }
}

TEST(LeaderStep, ZeroErrorZeroWrench) {
  TableGeometry g;
  LeaderParams p;
  p.style = LeaderStyle::MotionLed;
  p.anterior_bias = 0.0;
  p.gravity_share = 0.0;
  const TaskSpec t = lateral_left();
  const TaskTiming tm = task_timing(t, p.triggers);
  TableState s;
  const Reference r = task_reference(t, tm, g, 2.0);
  s.pose = r.pose;
  s.twist = r.twist;
  const LeaderOutput out = leader_step(s, t, p, g, 2.0);
  EXPECT_NEAR(out.wrench.left.norm() + out.wrench.right.norm(), 0.0, 1e-12);
  EXPECT_FALSE(out.saturated);
}

TEST(LeaderStep, TorquesTrackTriggers) {
  TableGeometry g;
  LeaderParams p;
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 0.05);
  const TaskSpec t = lateral_left();
  for (double time = 0.0; time < 8.0; time += 0.05) {
    TableState s;
    s.pose = {n(rng), n(rng), n(rng)};
    s.twist = {n(rng), n(rng), n(rng)};
    const LeaderOutput out = leader_step(s, t, p, g, time);
    const Vec3 tau = board_torques(out.wrench, g);
    EXPECT_NEAR(tau.z(), out.tz_ref, 1e-9);
    EXPECT_NEAR(tau.x(), out.tx_ref, 1e-9);
  }
}

TEST(LeaderStep, SaturationFlagged) {
  TableGeometry g;
  LeaderParams p;
  TableState s;
  s.pose.y = 50.0;  // far off the reference
  const LeaderOutput out = leader_step(s, lateral_left(), p, g, 1.0);
  EXPECT_TRUE(out.saturated);
  EXPECT_LE(out.wrench.left.cwiseAbs().maxCoeff(), 200.0);
  EXPECT_LE(out.wrench.right.cwiseAbs().maxCoeff(), 200.0);
}

TEST(Names, RoundTrip) {
  for (auto k : {TaskKind::LateralTranslation, TaskKind::PlanarRotation, TaskKind::AnteriorTranslation})
    EXPECT_EQ(task_kind_from_string(to_string(k)), k);
  for (int i = 0; i < 6; ++i)
    EXPECT_EQ(direction_from_string(to_string(static_cast<Direction>(i))), static_cast<Direction>(i));
  EXPECT_EQ(leader_style_from_string("motion"), LeaderStyle::MotionLed);
  EXPECT_THROW(task_kind_from_string("diagonal"), ValidationError);
  EXPECT_THROW(leader_style_from_string("psychic"), ValidationError);
}

}  // namespace
}  // namespace cobench
