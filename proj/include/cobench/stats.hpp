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

#include "cobench/common.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>

namespace cobench::stats {

inline double mean(std::span<const double> x) {
  require(!x.empty(), "mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Unbiased (n - 1) variance.
inline double sample_variance(std::span<const double> x) {
  require(x.size() >= 2, "sample variance needs at least two values");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

/// Product-moment correlation; nullopt when either series has zero variance.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "pearson: need two equal-length series of >= 2");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

enum class EffectSize { VerySmall, Small, Medium, Large, VeryLarge, Huge };

inline std::string_view to_string(EffectSize e) {
  constexpr std::string_view names[] = {"Very Small", "Small", "Medium", "Large", "Very Large", "Huge"};
  return names[static_cast<int>(e)];
}

/// Sawilowsky's ladder: 0.01 very small, 0.2 small, 0.5 medium, 0.8 large,
/// 1.2 very large, 2.0 huge. Anything under 0.2 is reported as very small.
inline EffectSize effect_size_category(double d) {
  const double a = std::abs(d);
  if (a >= 2.0) return EffectSize::Huge;
  if (a >= 1.2) return EffectSize::VeryLarge;
  if (a >= 0.8) return EffectSize::Large;
  if (a >= 0.5) return EffectSize::Medium;
  if (a >= 0.2) return EffectSize::Small;
  return EffectSize::VerySmall;
}

struct CohensD {
  double d = 0.0;
  EffectSize category = EffectSize::VerySmall;
};

/// (mean_a - mean_b) / pooled standard deviation.
inline std::optional<CohensD> cohens_d(std::span<const double> a, std::span<const double> b) {
  require(a.size() >= 2 && b.size() >= 2, "cohens_d: both samples need >= 2 values");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double pooled =
      std::sqrt(((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) / (na + nb - 2.0));
  if (pooled == 0.0) return std::nullopt;
  CohensD r;
  r.d = (mean(a) - mean(b)) / pooled;
  r.category = effect_size_category(r.d);
  return r;
}

struct TTest {
  double t = 0.0;
  double dof = 0.0;
  double p = 1.0;
};

/// Two-sided Welch unequal-variance t-test.
inline std::optional<TTest> ttest_unpaired(std::span<const double> a, std::span<const double> b) {
  require(a.size() >= 2 && b.size() >= 2, "ttest_unpaired: both samples need >= 2 values");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double va = sample_variance(a) / na, vb = sample_variance(b) / nb;
  const double se2 = va + vb;
  if (se2 == 0.0) return std::nullopt;
  TTest r;
  r.t = (mean(a) - mean(b)) / std::sqrt(se2);
  r.dof = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  const boost::math::students_t dist(r.dof);
  r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  return r;
}

}  // namespace cobench::stats
