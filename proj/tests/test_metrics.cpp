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


#include "cobench/baselines.hpp"
#include "cobench/metrics.hpp"
#include "cobench/stats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

namespace cobench {
namespace {

// Values from tests/oracles/derive.py.
constexpr double kMjCompletion[] = {2.364467735373373, 3.6074462256222892, 5.471913960995662};
constexpr double kMtmQuadratic = 0.07550000000000005;
constexpr double kTorqueChangeMixed = 42.28303835553053;
constexpr double kCohensDab = 2.195102299431727;
constexpr double kWelchT = 3.8437385328034503;
constexpr double kWelchP = 0.0039445879673207914;
constexpr double kWelchDf = 8.999162677601195;

const std::vector<double> kA = {2.1, 2.5, 3.3, 1.9, 2.8, 3.0};
const std::vector<double> kB = {1.2, 1.9, 1.4, 2.2, 1.1, 1.6, 1.7};

std::vector<double> clock(double t0, double dt, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = t0 + dt * static_cast<double>(k);
  return t;
}

TEST(CompletionTime, MinimumJerkOracle) {
  const double T[] = {3.0, 5.0, 8.0};
  for (int i = 0; i < 3; ++i) {
    const auto t = clock(0.0, 0.002, static_cast<std::size_t>((T[i] + 2.0) / 0.002) + 1);
    const auto x = minimum_jerk_series(t, 0.0, 2.0, 1.0, 1.0 + T[i]);
    const auto ct = completion_time(t, x, 0.0, 2.0);
    ASSERT_TRUE(ct);
    EXPECT_NEAR(*ct, kMjCompletion[i], 0.02);
  }
}

TEST(CompletionTime, NegativeDisplacement) {
  const auto t = clock(0.0, 0.002, 3001);
  const auto x = minimum_jerk_series(t, 0.0, -2.0, 0.5, 5.5);
  EXPECT_NEAR(*completion_time(t, x, 0.0, -2.0), kMjCompletion[1], 0.02);
}

TEST(CompletionTime, StepIsBufferOnly) {
  const auto t = clock(0.0, 0.01, 100);
  std::vector<double> x(100, 0.0);
  for (std::size_t k = 40; k < 100; ++k) x[k] = 1.0;
  EXPECT_DOUBLE_EQ(*completion_time(t, x, 0.0, 1.0), 0.5);
}

TEST(CompletionTime, UndefinedCases) {
  const auto t = clock(0.0, 0.01, 100);
  std::vector<double> x(100, 0.0);
  EXPECT_FALSE(completion_time(t, x, 0.0, 0.0));
  EXPECT_FALSE(completion_time(t, x, 0.0, 1.0));
  // Leaves the band again before the end.
  for (std::size_t k = 20; k < 60; ++k) x[k] = 1.0;
  EXPECT_FALSE(completion_time(t, x, 0.0, 1.0));
  EXPECT_THROW(completion_time(t, std::vector<double>(3), 0.0, 1.0), ValidationError);
}

TEST(CompletionTime, LastEntryCounts) {
  const auto t = clock(0.0, 0.01, 200);
  std::vector<double> x(200, 0.0);
  for (std::size_t k = 10; k < 200; ++k) x[k] = 0.5;
  for (std::size_t k = 50; k < 70; ++k) x[k] = 1.0;
  for (std::size_t k = 120; k < 200; ++k) x[k] = 1.0;
  EXPECT_NEAR(*completion_time(t, x, 0.0, 1.0), 1.1 + 0.5, 1e-12);
}

TEST(CompletionTime, TimeTranslationInvariant) {
  auto t = clock(0.0, 0.002, 4001);
  const auto x = minimum_jerk_series(t, 0.0, 2.0, 1.0, 6.0);
  const double a = *completion_time(t, x, 0.0, 2.0);
  for (auto& v : t) v += 1234.0;
  EXPECT_NEAR(*completion_time(t, x, 0.0, 2.0), a, 1e-9);
}

TEST(Mje, Examples) {
  const std::vector<double> ideal = {0, 1, 2, 3, 4};
  EXPECT_EQ(mje(ideal, ideal), 0.0);
  std::vector<double> off(ideal);
  for (auto& v : off) v -= 2.0;
  EXPECT_DOUBLE_EQ(mje(off, ideal), 10.0);
  EXPECT_DOUBLE_EQ(mje(off, ideal, true), 10.0);
  const std::vector<double> wobble = {1, 0, 3, 2, 4};
  EXPECT_DOUBLE_EQ(mje(wobble, ideal), 4.0);
  EXPECT_DOUBLE_EQ(mje(wobble, ideal, true), 0.0);
}

TEST(Mje, ConstantOffset) {
  const std::vector<double> ideal(100, 1.0);
  std::vector<double> up(100, 1.1), down(100, 0.9);
  EXPECT_NEAR(mje(up, ideal), 10.0, 1e-9);
  EXPECT_NEAR(mje(down, ideal), 10.0, 1e-9);
}

TEST(Mje, AbsoluteIsSymmetric) {
  const std::vector<double> a = {0.1, -0.4, 2.0, 1.5};
  const std::vector<double> b = {0.3, 0.2, 1.0, 1.6};
  EXPECT_DOUBLE_EQ(mje(a, b), mje(b, a));
  EXPECT_DOUBLE_EQ(mje(a, b, true), -mje(b, a, true));
}

TEST(Mje, ResampledOntoActualClock) {
  const auto ta = clock(0.0, 0.01, 101);
  const auto ti = clock(0.0, 0.002, 501);
  std::vector<double> ideal(ti.size()), actual(ta.size());
  for (std::size_t k = 0; k < ti.size(); ++k) ideal[k] = 3.0 * ti[k];
  for (std::size_t k = 0; k < ta.size(); ++k) actual[k] = 3.0 * ta[k] - 0.1;
  const MjeResult r = mje(ta, actual, ti, ideal);
  EXPECT_TRUE(r.resampled);
  EXPECT_NEAR(r.value, 0.1 * 101, 1e-9);
  EXPECT_FALSE(mje(ta, actual, ta, actual).resampled);
  EXPECT_EQ(mje(ta, actual, ta, actual).value, 0.0);
}

TEST(Torque, MtmConstantIsZero) {
  const std::vector<double> tau(50, 3.7);
  EXPECT_EQ(mtm(tau, 0.01), 0.0);
}

TEST(Torque, MtmUnitRate) {
  const double dt = 0.01;
  const auto tau = clock(0.0, dt, 101);
  EXPECT_NEAR(mtm(tau, dt), 200.0, 1e-9);
}

TEST(Torque, MtmQuadraticOracle) {
  std::vector<double> tau;
  for (int k = 0; k <= 10; ++k) tau.push_back(0.5 * (k * 0.01) * (k * 0.01));
  EXPECT_NEAR(mtm(tau, 0.01), kMtmQuadratic, 1e-12);
}

TEST(Torque, ChangeLinear) {
  const double dt = 0.01;
  const auto tau = clock(0.0, dt, 101);
  EXPECT_NEAR(torque_change(tau, tau, dt), 2.0, 1e-9);
  std::vector<double> neg(tau);
  for (auto& v : neg) v = -v;
  EXPECT_NEAR(torque_change(tau, neg, dt), 2.0, 1e-9);
}

TEST(Torque, ChangeOneSeriesConstant) {
  const double dt = 0.01;
  std::vector<double> flat(51, 4.0), ramp(51);
  for (int k = 0; k <= 50; ++k) ramp[k] = 2.0 * k * dt;
  EXPECT_NEAR(torque_change(flat, ramp, dt), 2.0, 1e-9);
}

TEST(Torque, ChangeMixedOracle) {
  std::vector<double> tau1, tau2;
  for (int k = 0; k <= 10; ++k) {
    tau1.push_back(0.5 * (k * 0.01) * (k * 0.01));
    tau2.push_back(std::sin(0.3 * k));
  }
  EXPECT_NEAR(torque_change(tau1, tau2, 0.01), kTorqueChangeMixed, 1e-9);
}

TEST(Torque, Rejections) {
  EXPECT_THROW(mtm(std::vector<double>{1.0}, 0.01), ValidationError);
  EXPECT_THROW(mtm(std::vector<double>{1.0, 2.0}, 0.0), ValidationError);
  EXPECT_THROW(torque_change(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}, 0.01), ValidationError);
}

TEST(Torque, OffsetInvariant) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  std::vector<double> tau(300), shifted(300);
  for (std::size_t k = 0; k < tau.size(); ++k) {
    tau[k] = n(rng);
    shifted[k] = tau[k] + 17.0;
  }
  EXPECT_NEAR(mtm(tau, 0.01), mtm(shifted, 0.01), 1e-6 * mtm(tau, 0.01));
  EXPECT_GE(torque_change(tau, shifted, 0.01), 0.0);
}

TEST(Stats, PearsonExamples) {
  const std::vector<double> x = {1, 2, 3};
  EXPECT_DOUBLE_EQ(*stats::pearson(x, x), 1.0);
  EXPECT_DOUBLE_EQ(*stats::pearson(x, std::vector<double>{3, 2, 1}), -1.0);
  EXPECT_NEAR(*stats::pearson(x, std::vector<double>{1, 3, 2}), 0.5, 1e-15);
  EXPECT_FALSE(stats::pearson(x, std::vector<double>{2, 2, 2}));
  EXPECT_THROW(stats::pearson(x, std::vector<double>{1, 2}), ValidationError);
}

TEST(Stats, PearsonAffineInvariant) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  std::vector<double> x(40), y(40), y2(40);
  for (int i = 0; i < 40; ++i) {
    x[i] = n(rng);
    y[i] = x[i] + n(rng);
    y2[i] = 4.0 * y[i] - 11.0;
  }
  const double r = *stats::pearson(x, y);
  EXPECT_NEAR(*stats::pearson(x, y2), r, 1e-12);
  EXPECT_NEAR(*stats::pearson(y, x), r, 1e-12);
  EXPECT_LE(std::abs(r), 1.0);
}

TEST(Stats, CohensDExamples) {
  EXPECT_EQ(stats::cohens_d(kA, kA)->d, 0.0);
  EXPECT_EQ(stats::cohens_d(kA, kA)->category, stats::EffectSize::VerySmall);
  // Unit pooled SD, means one and one half apart.
  const std::vector<double> a = {-1.0, 0.0, 1.0}, b = {0.0, 1.0, 2.0}, c = {-0.5, 0.5, 1.5};
  EXPECT_EQ(stats::cohens_d(b, a)->d, 1.0);
  EXPECT_EQ(stats::cohens_d(b, a)->category, stats::EffectSize::Large);
  EXPECT_EQ(stats::cohens_d(c, a)->d, 0.5);
  EXPECT_EQ(stats::cohens_d(c, a)->category, stats::EffectSize::Medium);
  EXPECT_FALSE(stats::cohens_d(std::vector<double>{1, 1}, std::vector<double>{2, 2}));
}

TEST(Stats, CohensDOracleAndAntisymmetry) {
  const auto d = stats::cohens_d(kA, kB);
  EXPECT_NEAR(d->d, kCohensDab, 1e-12);
  EXPECT_EQ(d->category, stats::EffectSize::Huge);
  EXPECT_NEAR(stats::cohens_d(kB, kA)->d, -kCohensDab, 1e-12);
}

TEST(Stats, EffectLadder) {
  using E = stats::EffectSize;
  EXPECT_EQ(stats::effect_size_category(0.0), E::VerySmall);
  EXPECT_EQ(stats::effect_size_category(0.19), E::VerySmall);
  EXPECT_EQ(stats::effect_size_category(0.2), E::Small);
  EXPECT_EQ(stats::effect_size_category(-0.8), E::Large);
  EXPECT_EQ(stats::effect_size_category(1.2), E::VeryLarge);
  EXPECT_EQ(stats::effect_size_category(2.0), E::Huge);
  EXPECT_EQ(stats::to_string(E::VeryLarge), "Very Large");
}

TEST(Stats, WelchOracle) {
  const auto r = stats::ttest_unpaired(kA, kB);
  EXPECT_NEAR(r->t, kWelchT, 1e-12);
  EXPECT_NEAR(r->dof, kWelchDf, 1e-9);
  EXPECT_NEAR(r->p, kWelchP, 1e-9);
  EXPECT_NEAR(stats::ttest_unpaired(kB, kA)->t, -kWelchT, 1e-12);
}

TEST(Stats, WelchIdenticalSamples) {
  const auto r = stats::ttest_unpaired(kA, kA);
  EXPECT_EQ(r->t, 0.0);
  EXPECT_DOUBLE_EQ(r->p, 1.0);
  EXPECT_FALSE(stats::ttest_unpaired(std::vector<double>{1, 1}, std::vector<double>{1, 1}));
}

TEST(Stats, WelchFiveSigmaSeparation) {
  std::normal_distribution<double> n;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> a(200), b(200);
    for (auto& v : a) v = n(rng);
    for (auto& v : b) v = 5.0 + n(rng);
    EXPECT_LT(stats::ttest_unpaired(a, b)->p, 1e-3);
  }
}

TEST(Baselines, ComparisonCsvVerbatim) {
  std::ostringstream os;
  baselines::write_comparison_csv(os, baselines::comparison_fixture_rows());
  const std::string expected =
      "metric,task,blind_hhi,evic,nnpc,sighted_hhi\n"
      "Completion Time (s),Rotation,7.08,8.25,8.26,6.58\n"
      "Completion Time (s),Translation,7.18,7.91,7.75,4.93\n"
      "MJE (rads),Rotation,392.71,96.44,87.38,344.70\n"
      "MJE (m),Translation,149.91,50.24,48.51,98.92\n"
      "MTM (N^2*m^2/s^2),Rotation,488454.38,65602.60,12770.75,341253.43\n"
      "MTM (N^2*m^2/s^2),Translation,387937.56,48191.90,15220.89,151758.83\n";
  EXPECT_EQ(os.str(), expected);
}

TEST(Baselines, FiguresMatchText) {
  for (const auto& r : baselines::kControllerComparison)
    for (const auto& f : {r.blind_hhi, r.evic, r.nnpc, r.sighted_hhi})
      EXPECT_DOUBLE_EQ(std::stod(std::string(f.text)), f.value);
  for (const auto& s : baselines::kBlindDyadStats)
    for (const auto& f : {s.mean_rotation, s.mean_translation, s.std_rotation, s.std_translation})
      EXPECT_DOUBLE_EQ(std::stod(std::string(f.text)), f.value);
}

}  // namespace
}  // namespace cobench
