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

// Synthetic training data: scripted leader with the trigger-driven follower
// over a seeded mix of lateral and rotation tasks.

#pragma once

#include "cobench/harness/trial.hpp"
#include "cobench/intent/ingest.hpp"

#include <numbers>
#include <random>
#include <vector>

namespace cobench::harness {

/// Alternates lateral left/right and rotation cw/ccw tasks with seeded
/// magnitudes (1.0-2.5 m, 45-100 deg).
inline std::vector<TaskSpec> mixed_tasks(int n, std::uint64_t seed) {
  require(n >= 0, "mixed_tasks: negative count");
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<TaskSpec> out;
  for (int i = 0; i < n; ++i) {
    TaskSpec t;
    switch (i % 4) {
      case 0: t.kind = TaskKind::LateralTranslation; t.direction = Direction::Left; break;
      case 1: t.kind = TaskKind::PlanarRotation; t.direction = Direction::Clockwise; break;
      case 2: t.kind = TaskKind::LateralTranslation; t.direction = Direction::Right; break;
      default: t.kind = TaskKind::PlanarRotation; t.direction = Direction::CounterClockwise; break;
    }
    t.magnitude = t.kind == TaskKind::LateralTranslation ? 1.0 + 1.5 * unit()
                                                         : (45.0 + 55.0 * unit()) * std::numbers::pi / 180.0;
    out.push_back(t);
  }
  return out;
}

struct CorpusSpec {
  int trials = 200;
  std::uint64_t seed = 1;
  LeaderJitter jitter{0.2, 0.2, 0.2};
  double sensor_noise = 0.3;
};

/// Runs `spec.trials` trigger-led EVIC trials and returns their 200 Hz
/// motion streams. `base` supplies geometry and controller parameters.
inline std::vector<std::vector<MotionSample>> synthetic_motion_corpus(BenchConfig base, const CorpusSpec& spec) {
  base.controller.type = "evic";
  base.leader.source = "scripted";
  base.leader.style = LeaderStyle::TorqueTriggers;
  base.leader.jitter = spec.jitter;
  base.sensor_noise = spec.sensor_noise;
  std::vector<std::vector<MotionSample>> out;
  const auto tasks = mixed_tasks(spec.trials, spec.seed);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    base.seed = spec.seed * 1000003ULL + i;
    out.push_back(intent::motion_from_log(run_trial(base, tasks[i]).log));
  }
  return out;
}

}  // namespace cobench::harness
