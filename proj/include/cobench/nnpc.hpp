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

// Prediction-driven follower: motion stream -> recurrent rollout -> base
// command at the grasp point.

#pragma once

#include "cobench/controllers.hpp"
#include "cobench/intent/lstm.hpp"
#include "cobench/signals.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>

namespace cobench {

struct NnpcParams {
  int horizon = 50;           // rollout length, motion samples
  int prediction_index = 50;  // 1-based rollout step that drives the base
  double replan_hz = 20.0;    // rollouts per second

  void validate() const {
    require(horizon >= 1, "nnpc horizon must be >= 1");
    require(prediction_index >= 1 && prediction_index <= horizon, "nnpc prediction index must lie in the horizon");
    require(finite(replan_hz) && replan_hz > 0.0 && replan_hz <= kPoseRateHz,
            "nnpc replan rate must be in (0, motion rate]");
  }

  bool operator==(const NnpcParams&) const = default;
};

class NnpcController {
 public:
  NnpcController(std::shared_ptr<const intent::RecurrentModel> model, const NnpcParams& params,
                 const TableGeometry& g, const VelocityLimits& limits)
      : model_(std::move(model)), params_(params), geom_(g), limits_(limits),
        window_(model_ ? model_->shape().window : intent::kDefaultWindow) {
    require(model_ != nullptr, "NnpcController needs a model");
    model_->validate();
    params_.validate();
    limits_.validate();
    every_ = std::max(1, static_cast<int>(std::lround(kPoseRateHz / params_.replan_hz)));
  }

  /// Feeds the simulator pose at time `t`. Motion samples are taken on the
  /// 200 Hz clock by interpolating between consecutive calls.
  ControlCommand update(double t, const Pose2& pose) {
    resampler_.feed(t, pose, [this](const Pose2& p) { sample(p); });
    return command_;
  }

  const std::optional<Twist2>& prediction() const { return prediction_; }
  bool warm() const { return window_.warm(); }

 private:
  void sample(const Pose2& p) {
    window_.push(model_->scaler.apply(estimator_(p)));
    ++samples_;
    if (!window_.warm()) {
      command_ = nnpc_step(std::nullopt, geom_, limits_);
      return;
    }
    if (samples_ % every_ != 0 && prediction_) return;
    const auto roll = intent::iterated_predict(*model_, window_, params_.horizon);
    const MotionSample v = model_->scaler.invert(roll[static_cast<std::size_t>(params_.prediction_index - 1)]);
    prediction_ = Twist2{v[0], v[1], v[5]};
    command_ = nnpc_step(prediction_, geom_, limits_);
  }

  std::shared_ptr<const intent::RecurrentModel> model_;
  NnpcParams params_;
  TableGeometry geom_;
  VelocityLimits limits_;
  intent::PredictionWindow window_;
  MotionEstimator estimator_;
  int every_ = 10;
  long samples_ = 0;
  PoseResampler resampler_;
  std::optional<Twist2> prediction_;
  ControlCommand command_;
};

}  // namespace cobench
