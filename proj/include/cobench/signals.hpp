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

// Sensor-side processing: filtering, differentiation, multirate sampling and
// the interaction/external split of the measured load.

#pragma once

#include "cobench/common.hpp"
#include "cobench/dynamics.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace cobench {

inline constexpr double kForceRateHz = 100.0;
inline constexpr double kPoseRateHz = 200.0;

struct FilterSpec {
  int order = 2;
  double cutoff_hz = 20.0;
  double sample_rate_hz = kPoseRateHz;

  void validate() const {
    require(order == 2, "only second-order low-pass filters are supported");
    require(finite(cutoff_hz) && finite(sample_rate_hz), "filter frequencies must be finite");
    require(cutoff_hz > 0.0 && cutoff_hz < 0.5 * sample_rate_hz,
            "filter cutoff must lie strictly between 0 and the Nyquist frequency");
  }
};

/// Second-order Butterworth low-pass as a bilinear-transform biquad with
/// frequency prewarping, so the -3 dB point lands exactly on the cutoff.
/// The first sample primes the state as if the input had always held that
/// value, so a constant input produces no start-up transient.
class LowpassFilter {
 public:
  explicit LowpassFilter(const FilterSpec& spec) {
    spec.validate();
    const double k = std::tan(std::numbers::pi * spec.cutoff_hz / spec.sample_rate_hz);
    const double q = std::numbers::sqrt2;
    const double norm = 1.0 / (1.0 + q * k + k * k);
    b0_ = k * k * norm;
    b1_ = 2.0 * b0_;
    b2_ = b0_;
    a1_ = 2.0 * (k * k - 1.0) * norm;
    a2_ = (1.0 - q * k + k * k) * norm;
  }

  double operator()(double x) {
    if (!primed_) reset(x);
    // Transposed direct form II.
    const double y = b0_ * x + z1_;
    z1_ = b1_ * x - a1_ * y + z2_;
    z2_ = b2_ * x - a2_ * y;
    return y;
  }

  /// Sets the internal state to the steady state for a constant input `x`.
  void reset(double x) {
    z1_ = x - b0_ * x;
    z2_ = b2_ * x - a2_ * x;
    primed_ = true;
  }

  bool primed() const { return primed_; }

 private:
  double b0_ = 0, b1_ = 0, b2_ = 0, a1_ = 0, a2_ = 0;
  double z1_ = 0, z2_ = 0;
  bool primed_ = false;
};

inline std::vector<double> lowpass(std::span<const double> series, const FilterSpec& spec) {
  require(!series.empty(), "lowpass: empty series");
  LowpassFilter f(spec);
  std::vector<double> out;
  out.reserve(series.size());
  for (double x : series) out.push_back(f(x));
  return out;
}

/// Backward first difference followed by the low-pass. The first output
/// reuses the first difference so the derivative stream has no start-up step.
inline std::vector<double> differentiate(std::span<const double> series, const FilterSpec& spec) {
  require(series.size() >= 2, "differentiate: need at least two samples");
  const double dt = 1.0 / spec.sample_rate_hz;
  std::vector<double> d(series.size());
  for (std::size_t k = 1; k < series.size(); ++k) d[k] = (series[k] - series[k - 1]) / dt;
  d[0] = d[1];
  return lowpass(d, spec);
}

/// Zero-order hold of (src_t, src_v) onto dst_t. Destination times before the
/// first source sample take the first value.
inline std::vector<double> zero_order_hold(std::span<const double> src_t, std::span<const double> src_v,
                                           std::span<const double> dst_t) {
  require(src_t.size() == src_v.size() && !src_t.empty(), "zero_order_hold: bad source series");
  std::vector<double> out;
  out.reserve(dst_t.size());
  std::size_t j = 0;
  for (double t : dst_t) {
    while (j + 1 < src_t.size() && src_t[j + 1] <= t + 1e-12) ++j;
    out.push_back(src_v[j]);
  }
  return out;
}

struct ForceSplit {
  Vec3 external = Vec3::Zero();     // m a
  Vec3 interaction = Vec3::Zero();  // total - m a
};

/// Splits a measured total force into the part that accelerates the board
/// and the remainder.
inline ForceSplit interaction_force(const Vec3& total, const TableGeometry& g, const Vec3& accel) {
  require(total.allFinite() && accel.allFinite(), "interaction_force: non-finite input");
  ForceSplit s;
  s.external = g.mass * accel;
  s.interaction = total - s.external;
  return s;
}

struct TorqueSplit {
  Vec3 total = Vec3::Zero();
  Vec3 external = Vec3::Zero();
  Vec3 interaction = Vec3::Zero();
};

/// Sensor moments are neglected; the total comes from the handle forces.
inline TorqueSplit interaction_torque(const HandleWrench& w, const TableGeometry& g, const TableState& s) {
  require(all_finite(s.twist) && all_finite(s.accel), "interaction_torque: non-finite state");
  TorqueSplit out;
  out.total = board_torques(w, g);
  out.external = external_torque(s, g);
  out.interaction = out.total - out.external;
  return out;
}

/// Streaming derivative: first difference then low-pass, at a fixed rate.
class StreamingDerivative {
 public:
  explicit StreamingDerivative(const FilterSpec& spec) : filter_(spec), dt_(1.0 / spec.sample_rate_hz) {}

  double operator()(double x) {
    if (!prev_) {
      prev_ = x;
      return filter_(0.0);
    }
    const double d = (x - *prev_) / dt_;
    prev_ = x;
    return filter_(d);
  }

 private:
  LowpassFilter filter_;
  double dt_;
  std::optional<double> prev_;
};

/// Six motion channels fed to the intent estimator: table-frame linear and
/// angular velocity (vx, vy, vz, wx, wy, wz).
using MotionSample = std::array<double, 6>;

/// Turns 200 Hz pose samples into filtered table-frame velocities, the way
/// a motion-capture stream is differentiated and smoothed.
class MotionEstimator {
 public:
  explicit MotionEstimator(const FilterSpec& spec = {}) : dx_(spec), dy_(spec), dth_(spec) {}

  MotionSample operator()(const Pose2& p) {
    const double theta = unwrap(p.theta);
    const double vx_w = dx_(p.x);
    const double vy_w = dy_(p.y);
    const double wz = dth_(theta);
    const Vec2 v = rotate(Vec2(vx_w, vy_w), -theta);
    return {v.x(), v.y(), 0.0, 0.0, 0.0, wz};
  }

 private:
  double unwrap(double theta) {
    if (last_theta_) {
      const double delta = wrap_angle(theta - *last_theta_);
      unwrapped_ += delta;
    } else {
      unwrapped_ = theta;
    }
    last_theta_ = theta;
    return unwrapped_;
  }

  StreamingDerivative dx_, dy_, dth_;
  std::optional<double> last_theta_;
  double unwrapped_ = 0.0;
};

/// Resamples an irregular or faster pose stream onto a fixed clock anchored
/// at the first sample, by linear interpolation between consecutive inputs.
class PoseResampler {
 public:
  explicit PoseResampler(double rate_hz = kPoseRateHz) : period_(1.0 / rate_hz) {
    require(finite(rate_hz) && rate_hz > 0.0, "resample rate must be positive");
  }

  /// Calls `emit(pose)` for every clock tick in (last t, t].
  template <typename F>
  void feed(double t, const Pose2& pose, F&& emit) {
    if (!last_) {
      t0_ = t;
      next_ = 1;
      emit(pose);
    } else {
      while (t0_ + static_cast<double>(next_) * period_ <= t + 1e-12) {
        const double w = (t0_ + static_cast<double>(next_) * period_ - last_t_) / (t - last_t_);
        emit(Pose2{last_->x + w * (pose.x - last_->x), last_->y + w * (pose.y - last_->y),
                   last_->theta + w * wrap_angle(pose.theta - last_->theta)});
        ++next_;
      }
    }
    last_ = pose;
    last_t_ = t;
  }

 private:
  double period_;
  double t0_ = 0.0;
  double last_t_ = 0.0;
  long next_ = 0;
  std::optional<Pose2> last_;
};

/// Filtered load at the centre of mass plus first-difference rates.
struct SensedLoad {
  double t = 0.0;
  Vec3 force = Vec3::Zero();        // force the leader applies to the board, table frame
  Vec3 torque = Vec3::Zero();       // board_torques of the handle readings
  Vec3 force_rate = Vec3::Zero();
  Vec3 torque_rate = Vec3::Zero();
};

/// 100 Hz force/torque sensing chain: optional additive noise, 20 Hz
/// low-pass, first-difference rates on the filtered stream.
class LoadSensor {
 public:
  LoadSensor(const TableGeometry& g, double noise_std = 0.0, std::uint64_t seed = 0,
             const FilterSpec& spec = {2, 20.0, kForceRateHz})
      : geom_(g),
        noise_std_(noise_std),
        rng_(seed),
        filters_{LowpassFilter(spec), LowpassFilter(spec), LowpassFilter(spec),
                 LowpassFilter(spec), LowpassFilter(spec), LowpassFilter(spec)},
        dt_(1.0 / spec.sample_rate_hz) {
    require(finite(noise_std) && noise_std >= 0.0, "sensor noise must be non-negative");
  }

  /// Feeds one sample taken at time `t` and returns the updated reading.
  const SensedLoad& sample(double t, HandleWrench w) {
    if (noise_std_ > 0.0) {
      std::normal_distribution<double> n(0.0, noise_std_);
      for (Vec3* f : {&w.left, &w.right})
        for (int i = 0; i < 3; ++i) (*f)[i] += n(rng_);
    }
    const Vec2 planar = leader_planar_force(w);
    const Vec3 force(planar.x(), planar.y(), -(w.left.z() + w.right.z()));
    const Vec3 torque = board_torques(w, geom_);
    SensedLoad next;
    next.t = t;
    for (int i = 0; i < 3; ++i) {
      next.force[i] = filters_[i](force[i]);
      next.torque[i] = filters_[3 + i](torque[i]);
    }
    if (has_last_) {
      next.force_rate = (next.force - last_.force) / dt_;
      next.torque_rate = (next.torque - last_.torque) / dt_;
    }
    last_ = next;
    has_last_ = true;
    return last_;
  }

  const SensedLoad& last() const { return last_; }

 private:
  TableGeometry geom_;
  double noise_std_;
  std::mt19937_64 rng_;
  std::array<LowpassFilter, 6> filters_;
  double dt_;
  SensedLoad last_;
  bool has_last_ = false;
};

}  // namespace cobench
