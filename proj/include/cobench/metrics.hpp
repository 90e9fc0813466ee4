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

// Trial scoring: completion time, minimum-jerk error, torque-rate measures.

#pragma once

#include "cobench/common.hpp"
#include "cobench/leader.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace cobench {

/// Time from first moving past 5% of the displacement to the last entry into
/// the 95% band, plus a 0.5 s buffer for the motion the thresholds miss.
/// Undefined (nullopt) when the displacement is below `resolution` or the
/// trajectory never reaches both thresholds.
inline std::optional<double> completion_time(std::span<const double> t, std::span<const double> x, double start,
                                             double end, double resolution = 1e-9) {
  require(t.size() == x.size(), "completion_time: length mismatch");
  const double span = end - start;
  if (std::abs(span) < resolution || t.empty()) return std::nullopt;

  std::optional<std::size_t> first_exit;
  std::optional<std::size_t> last_entry;
  bool inside = false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double p = (x[k] - start) / span;
    if (!first_exit && p > 0.05) first_exit = k;
    const bool now_inside = p >= 0.95;
    if (now_inside && !inside) last_entry = k;
    inside = now_inside;
  }
  if (!first_exit || !last_entry || !inside) return std::nullopt;
  return t[*last_entry] - t[*first_exit] + 0.5;
}

struct MjeResult {
  double value = 0.0;
  bool resampled = false;
};

/// Linear interpolation of (src_t, src_v) at `t`, clamped at the ends.
inline double interpolate(std::span<const double> src_t, std::span<const double> src_v, double t) {
  if (t <= src_t.front()) return src_v.front();
  if (t >= src_t.back()) return src_v.back();
  const auto it = std::upper_bound(src_t.begin(), src_t.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - src_t.begin());
  const double w = (t - src_t[j - 1]) / (src_t[j] - src_t[j - 1]);
  return src_v[j - 1] + w * (src_v[j] - src_v[j - 1]);
}

/// Sum of residuals between an ideal and an actual trajectory. Absolute
/// residuals by default; `signed_sum` reproduces the literal signed form.
/// When the clocks differ the ideal series is interpolated onto the actual
/// clock and the result is flagged.
inline MjeResult mje(std::span<const double> actual_t, std::span<const double> actual,
                     std::span<const double> ideal_t, std::span<const double> ideal, bool signed_sum = false) {
  require(actual_t.size() == actual.size() && ideal_t.size() == ideal.size(), "mje: length mismatch");
  require(!actual.empty() && !ideal.empty(), "mje: empty series");
  MjeResult r;
  const bool same_clock = actual_t.size() == ideal_t.size() &&
                          std::equal(actual_t.begin(), actual_t.end(), ideal_t.begin());
  r.resampled = !same_clock;
  for (std::size_t k = 0; k < actual.size(); ++k) {
    const double ref = same_clock ? ideal[k] : interpolate(ideal_t, ideal, actual_t[k]);
    const double res = ref - actual[k];
    r.value += signed_sum ? res : std::abs(res);
  }
  return r;
}

/// Same-clock convenience form.
inline double mje(std::span<const double> actual, std::span<const double> ideal, bool signed_sum = false) {
  require(actual.size() == ideal.size(), "mje: clock mismatch needs timestamps");
  double s = 0.0;
  for (std::size_t k = 0; k < actual.size(); ++k) {
    const double res = ideal[k] - actual[k];
    s += signed_sum ? res : std::abs(res);
  }
  return s;
}

/// Minimum-jerk reference sampled on `t` (held at the endpoints outside
/// [t0, tf]).
inline std::vector<double> minimum_jerk_series(std::span<const double> t, double x0, double xf, double t0,
                                               double tf) {
  std::vector<double> out;
  out.reserve(t.size());
  for (double tk : t) out.push_back(minimum_jerk(x0, xf, tk, t0, tf));
  return out;
}

/// Per-sample first-difference rate; the last sample repeats the final
/// difference so the rate series has one entry per sample.
inline std::vector<double> sample_rates(std::span<const double> series, double dt) {
  require(series.size() >= 2, "torque-rate metrics need at least two samples");
  require(finite(dt) && dt > 0.0, "torque-rate metrics need a positive dt");
  std::vector<double> r(series.size());
  for (std::size_t k = 0; k + 1 < series.size(); ++k) r[k] = (series[k + 1] - series[k]) / dt;
  r.back() = r[r.size() - 2];
  return r;
}

/// Minimum-torque measure: sum over consecutive pairs of squared rates.
inline double mtm(std::span<const double> torque, double dt) {
  const auto r = sample_rates(torque, dt);
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < r.size(); ++k) s += r[k] * r[k] + r[k + 1] * r[k + 1];
  return s;
}

/// Trapezoidal integral of the squared torque-rate sum of two aligned series.
inline double torque_change(std::span<const double> tau1, std::span<const double> tau2, double dt) {
  require(tau1.size() == tau2.size(), "torque_change: series not aligned");
  const auto r1 = sample_rates(tau1, dt);
  const auto r2 = sample_rates(tau2, dt);
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < r1.size(); ++k) {
    const double a = r1[k] * r1[k] + r2[k] * r2[k];
    const double b = r1[k + 1] * r1[k + 1] + r2[k + 1] * r2[k + 1];
    s += 0.5 * (a + b) * dt;
  }
  return s;
}

}  // namespace cobench
