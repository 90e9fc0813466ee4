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

#include "cobench/intent/standardize.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace cobench::intent {

inline constexpr int kDefaultWindow = 150;

/// Fixed-capacity ring of the most recent standardized motion samples.
class PredictionWindow {
 public:
  explicit PredictionWindow(int capacity = kDefaultWindow) : buf_(static_cast<std::size_t>(capacity)) {
    require(capacity >= 1, "PredictionWindow: capacity must be >= 1");
  }

  void push(const MotionSample& x) {
    buf_[head_] = x;
    head_ = (head_ + 1) % buf_.size();
    if (size_ < buf_.size()) ++size_;
  }

  void clear() {
    head_ = 0;
    size_ = 0;
  }

  int capacity() const { return static_cast<int>(buf_.size()); }
  int size() const { return static_cast<int>(size_); }
  bool warm() const { return size_ == buf_.size(); }

  /// k-th oldest sample, 0 <= k < size().
  const MotionSample& at(int k) const {
    require(k >= 0 && k < size(), "PredictionWindow: index out of range");
    const std::size_t start = (head_ + buf_.size() - size_) % buf_.size();
    return buf_[(start + static_cast<std::size_t>(k)) % buf_.size()];
  }

  const MotionSample& newest() const { return at(size() - 1); }

  /// Oldest-first copy, one column per step.
  Eigen::MatrixXd matrix() const {
    Eigen::MatrixXd m(kChannels, size());
    for (int k = 0; k < size(); ++k)
      for (int c = 0; c < kChannels; ++c) m(c, k) = at(k)[static_cast<std::size_t>(c)];
    return m;
  }

 private:
  std::vector<MotionSample> buf_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

}  // namespace cobench::intent
