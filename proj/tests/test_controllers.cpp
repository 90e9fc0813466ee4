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


#include "cobench/controllers.hpp"

#include <gtest/gtest.h>

#include <random>

namespace cobench {
namespace {

// Decision table over {-2, -1/2, 0, 1/2, 2} x threshold, rows tau_z, columns
// tau_x; written out by hand from the five-way rule (also printed by
// tests/oracles/derive.py).
constexpr Mode L = Mode::LeftTranslation, R = Mode::RightTranslation, LR = Mode::LeftRotation,
               RR = Mode::RightRotation, S = Mode::Stop;
constexpr Mode kTruth[5][5] = {
    {S, S, S, S, L},
    {LR, S, S, S, RR},
    {LR, S, S, S, RR},
    {LR, S, S, S, RR},
    {R, S, S, S, S},
};
constexpr double kGrid[5] = {-2.0, -0.5, 0.0, 0.5, 2.0};

SensedLoad load(double fx, double tz, double tx) {
  SensedLoad l;
  l.force.x() = fx;
  l.torque.z() = tz;
  l.torque.x() = tx;
  return l;
}

TEST(Bmvic, ZeroStaysZero) {
  EXPECT_EQ(*bmvic_translation_step(0, 0, 0, VicParams{}, 0.002), 0.0);
}

TEST(Bmvic, HandEvaluatedAcceleration) {
  // (0.6 - 0.6 + 0.2) / 1.2 = 0.1667 m/s^2, one step of 1 s isolates it.
  const double v = *bmvic_translation_step(0.6, 1.0, 1.0, VicParams{}, 1.0);
  EXPECT_NEAR(v - 1.0, 0.16666666666666669, 1e-15);
}

TEST(Bmvic, SteadyStateIsForceOverDamping) {
  double v = 0.0;
  for (int k = 0; k < 5000; ++k) v = *bmvic_translation_step(0.6, 0.0, v, VicParams{}, 0.002);
  EXPECT_NEAR(v, 1.0, 0.01);
}

TEST(Bmvic, FirstOrderStepResponse) {
  VicParams p;
  p.force_rate_gain = 0.0;
  double v = 0.0;
  for (int k = 0; k < 1000; ++k) v = *bmvic_translation_step(0.6, 0.0, v, p, 0.002);
  // Oracle: explicit Euler 0.632304575229036, exact 0.6321205588285577.
  EXPECT_NEAR(v, 0.632304575229036, 1e-12);
  EXPECT_NEAR(v, 0.6321205588285577, 0.01 * 0.6321205588285577);
}

TEST(Bmvic, RotationUsesRotationalParameters) {
  VicParams p;
  const double w = *bmvic_rotation_step(0.12, 0.0, 0.0, p, 1.0);
  EXPECT_DOUBLE_EQ(w, 1.0);  // a = tau / I
}

TEST(Bmvic, NonFiniteInputStops) {
  EXPECT_FALSE(bmvic_translation_step(NAN, 0, 0, VicParams{}, 0.002));
  EXPECT_FALSE(bmvic_translation_step(0, INFINITY, 0, VicParams{}, 0.002));
  BmvicController c(VicParams{}, VelocityLimits{});
  for (int k = 0; k < 100; ++k) c.update(load(0.6, 0, 0), 0.002);
  SensedLoad bad = load(NAN, 0, 0);
  const auto cmd = c.update(bad, 0.002);
  EXPECT_EQ(cmd.mode, Mode::Stop);
  EXPECT_EQ(cmd.twist, Twist2{});
}

TEST(Bmvic, RejectsBadParameters) {
  VicParams p;
  p.mass = 0.0;
  EXPECT_THROW(BmvicController(p, VelocityLimits{}), ValidationError);
  p = {};
  p.force_rate_gain = -0.1;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(EvicClassify, PublishedBranches) {
  EvicParams p;
  EXPECT_EQ(evic_classify(-4, 2, p), Mode::LeftTranslation);
  EXPECT_EQ(evic_classify(0, 2, p), Mode::RightRotation);
  EXPECT_EQ(evic_classify(0, 0, p), Mode::Stop);
  EXPECT_EQ(evic_classify(0, -2, p), Mode::LeftRotation);
  EXPECT_EQ(evic_classify(4, -2, p), Mode::RightTranslation);
}

TEST(EvicClassify, ExhaustiveGrid) {
  EvicParams p;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      EXPECT_EQ(evic_classify(kGrid[i] * p.tz_threshold, kGrid[j] * p.tx_threshold, p), kTruth[i][j])
          << "cell " << i << "," << j;
}

TEST(EvicClassify, ThresholdsAreInclusive) {
  EvicParams p;
  EXPECT_EQ(evic_classify(-3.0, 1.5, p), Mode::LeftTranslation);
  EXPECT_EQ(evic_classify(3.0, 1.5, p), Mode::RightRotation);
  EXPECT_EQ(evic_classify(-2.999, 1.5, p), Mode::RightRotation);
}

TEST(EvicClassify, Homogeneous) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-8.0, 8.0), s(0.1, 10.0);
  EvicParams p;
  for (int i = 0; i < 2000; ++i) {
    // Multiples of 1/8 keep the scaled comparisons exact.
    const double tz = std::round(u(rng) * 8) / 8, tx = std::round(u(rng) * 8) / 8;
    const double k = std::ldexp(1.0, static_cast<int>(std::round(std::log2(s(rng)))));
    EvicParams q = p;
    q.tz_threshold *= k;
    q.tx_threshold *= k;
    EXPECT_EQ(evic_classify(tz, tx, p), evic_classify(k * tz, k * tx, q));
  }
}

TEST(Evic, RampOneStep) {
  EvicParams p;
  p.debounce = 0.0;
  EvicController c(VicParams{}, p, VelocityLimits{});
  const auto cmd = c.update(load(0, -4, 2), 0.002);
  EXPECT_EQ(cmd.mode, Mode::LeftTranslation);
  EXPECT_NEAR(cmd.twist.vy, -0.001, 1e-15);
}

TEST(Evic, HoldsTargetSpeed) {
  EvicParams p;
  EvicController c(VicParams{}, p, VelocityLimits{});
  ControlCommand cmd;
  for (int k = 0; k < 1000; ++k) cmd = c.update(load(0, -4, 2), 0.002);
  EXPECT_DOUBLE_EQ(cmd.twist.vy, -0.35);
}

TEST(Evic, StopRampsDownIn0p7s) {
  EvicParams p;
  p.debounce = 0.0;
  EvicController c(VicParams{}, p, VelocityLimits{});
  for (int k = 0; k < 1000; ++k) c.update(load(0, -4, 2), 0.002);
  ASSERT_DOUBLE_EQ(c.twist().vy, -0.35);
  int steps = 0;
  while (c.twist().vy != 0.0 && steps < 10000) {
    c.update(load(0, 0, 0), 0.002);
    ++steps;
  }
  EXPECT_NEAR(steps * 0.002, 0.7, 0.002 + 1e-9);
}

TEST(Evic, DebounceHoldsPreviousMode) {
  EvicController c(VicParams{}, EvicParams{}, VelocityLimits{});
  // 40 ms pulses alternating with 40 ms rest never persist for 100 ms.
  for (int k = 0; k < 1000; ++k) {
    const bool on = (k / 20) % 2 == 0;
    EXPECT_EQ(c.update(on ? load(0, -4, 2) : load(0, 0, 0), 0.002).mode, Mode::Stop);
  }
  // A steady trigger switches after exactly the debounce time.
  int k = 0;
  while (c.update(load(0, -4, 2), 0.002).mode == Mode::Stop) ++k;
  EXPECT_EQ(k + 1, 50);
}

TEST(Evic, AnteriorUsesAdmittance) {
  EvicController c(VicParams{}, EvicParams{}, VelocityLimits{});
  ControlCommand cmd;
  for (int k = 0; k < 20000; ++k) cmd = c.update(load(0.3, 0, 0), 0.002);
  EXPECT_NEAR(cmd.twist.vx, 0.5, 1e-6);  // F/c = 0.5
  EXPECT_EQ(cmd.mode, Mode::Stop);
}

TEST(Evic, CommandRateWithinAccelerationLimits) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  EvicParams p;
  EvicController c(VicParams{}, p, VelocityLimits{});
  Twist2 prev;
  for (int k = 0; k < 20000; ++k) {
    const double tz = (k / 300) % 2 ? u(rng) : -4.0, tx = (k / 300) % 2 ? u(rng) : 2.0;
    const auto cmd = c.update(load(0, tz, tx), 0.002);
    EXPECT_LE(std::abs(cmd.twist.vy - prev.vy), p.lateral_accel * 0.002 + 1e-12);
    EXPECT_LE(std::abs(cmd.twist.wz - prev.wz), p.rotation_accel * 0.002 + 1e-12);
    prev = cmd.twist;
  }
}

TEST(Limits, AllControllersRespectVmax) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 40.0);
  VelocityLimits lim;
  BmvicController b(VicParams{}, lim);
  EvicController e(VicParams{}, EvicParams{}, lim);
  for (int k = 0; k < 20000; ++k) {
    SensedLoad l;
    l.force = {n(rng), n(rng), n(rng)};
    l.torque = {n(rng), n(rng), n(rng)};
    l.force_rate = {n(rng), n(rng), n(rng)};
    l.torque_rate = {n(rng), n(rng), n(rng)};
    EXPECT_TRUE(lim.contains(b.update(l, 0.002).twist));
    EXPECT_TRUE(lim.contains(e.update(l, 0.002).twist));
    const Twist2 pred{n(rng), n(rng), n(rng)};
    EXPECT_TRUE(lim.contains(nnpc_step(pred, TableGeometry{}, lim).twist));
  }
}

TEST(Transport, NoRotation) {
  const Twist2 v = transport_velocity({0.3, -0.1, 0.0}, Vec2(-0.61, 0.0));
  EXPECT_EQ(v, (Twist2{0.3, -0.1, 0.0}));
}

TEST(Transport, PureRotation) {
  const Twist2 v = transport_velocity({0.0, 0.0, 0.4}, Vec2(-0.61, 0.0));
  EXPECT_NEAR(v.vx, 0.0, 1e-15);
  EXPECT_NEAR(v.vy, -0.244, 1e-15);
}

TEST(Transport, Superposition) {
  const Twist2 v = transport_velocity({0.35, 0.0, 0.4}, Vec2(-0.61, 0.0));
  EXPECT_NEAR(v.vx, 0.35, 1e-15);
  EXPECT_NEAR(v.vy, -0.244, 1e-15);
}

TEST(Nnpc, ZeroPrediction) {
  const auto cmd = nnpc_step(Twist2{}, TableGeometry{}, VelocityLimits{});
  EXPECT_EQ(cmd.twist, Twist2{});
  EXPECT_EQ(cmd.mode, Mode::Nnpc);
}

TEST(Nnpc, ClampsLateral) {
  VelocityLimits lim;
  lim.vy = 0.4;
  EXPECT_DOUBLE_EQ(nnpc_step(Twist2{0, 0.5, 0}, TableGeometry{}, lim).twist.vy, 0.4);
}

TEST(Nnpc, TransportThenClamp) {
  const auto cmd = nnpc_step(Twist2{0, 0.2, 0.4}, TableGeometry{}, VelocityLimits{});
  EXPECT_NEAR(cmd.twist.vx, 0.0, 1e-15);
  EXPECT_NEAR(cmd.twist.vy, -0.044, 1e-15);
  EXPECT_DOUBLE_EQ(cmd.twist.wz, 0.4);
}

TEST(Nnpc, ColdWindowStops) {
  const auto cmd = nnpc_step(std::nullopt, TableGeometry{}, VelocityLimits{});
  EXPECT_EQ(cmd.mode, Mode::Stop);
  EXPECT_EQ(cmd.twist, Twist2{});
}

TEST(Mode, NamesRoundTrip) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i)
    EXPECT_EQ(mode_from_string(to_string(static_cast<Mode>(i))), static_cast<Mode>(i));
  EXPECT_THROW(mode_from_string("Sideways"), ValidationError);
}

}  // namespace
}  // namespace cobench
