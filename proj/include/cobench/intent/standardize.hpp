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
#include "cobench/signals.hpp"

#include <array>
#include <cmath>
#include <iostream>
#include <span>
#include <vector>

namespace cobench::intent {

inline constexpr int kChannels = 6;

/// Per-channel affine scaling to zero mean and unit population std.
struct Standardizer {
  std::array<double, kChannels> mean{};
  std::array<double, kChannels> std{1, 1, 1, 1, 1, 1};
  std::array<bool, kChannels> clamped{};

  /// Fits on every sample of every sequence. A channel with zero variance
  /// keeps std = 1 and is reported on std::clog.
  static Standardizer fit(std::span<const std::vector<MotionSample>> sequences, bool warn = true) {
    Standardizer s;
    std::array<double, kChannels> sum{}, sq{};
    double n = 0.0;
    for (const auto& seq : sequences) {
      for (const auto& x : seq) {
        for (int c = 0; c < kChannels; ++c) sum[c] += x[c];
        n += 1.0;
      }
    }
    require(n > 0.0, "Standardizer::fit: no samples");
    for (int c = 0; c < kChannels; ++c) s.mean[c] = sum[c] / n;
    for (const auto& seq : sequences)
      for (const auto& x : seq)
        for (int c = 0; c < kChannels; ++c) sq[c] += (x[c] - s.mean[c]) * (x[c] - s.mean[c]);
    for (int c = 0; c < kChannels; ++c) {
      const double sd = std::sqrt(sq[c] / n);
      if (sd > 1e-12 && std::isfinite(sd)) {
        s.std[c] = sd;
      } else {
        s.std[c] = 1.0;
        s.clamped[c] = true;
        if (warn) std::clog << "warning: motion channel " << c << " has zero variance; std clamped to 1\n";
      }
    }
    return s;
  }

  static Standardizer fit(std::span<const double> values, bool warn = true) {
    std::vector<MotionSample> seq;
    for (double v : values) seq.push_back({v, v, v, v, v, v});
    const std::vector<std::vector<MotionSample>> one{seq};
    return fit(std::span<const std::vector<MotionSample>>(one), warn);
  }

  MotionSample apply(const MotionSample& x) const {
    MotionSample out;
    for (int c = 0; c < kChannels; ++c) out[c] = (x[c] - mean[c]) / std[c];
    return out;
  }

  MotionSample invert(const MotionSample& z) const {
    MotionSample out;
    for (int c = 0; c < kChannels; ++c) out[c] = z[c] * std[c] + mean[c];
    return out;
  }

  std::vector<MotionSample> apply(std::span<const MotionSample> xs) const {
    std::vector<MotionSample> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(apply(x));
    return out;
  }

  void validate() const {
    for (int c = 0; c < kChannels; ++c) {
      require(std::isfinite(mean[c]), "standardizer mean must be finite");
      require(std::isfinite(this->std[c]) && this->std[c] > 0.0, "standardizer std must be positive");
    }
  }

  bool operator==(const Standardizer& o) const { return mean == o.mean && std == o.std; }
};

}  // namespace cobench::intent
