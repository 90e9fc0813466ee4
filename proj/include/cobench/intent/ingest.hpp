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

// Motion corpora from trial logs or plain CSV.

#pragma once

#include "cobench/harness/log_io.hpp"
#include "cobench/signals.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cobench::intent {

/// 200 Hz filtered table-frame velocities from a pose stream, the same chain
/// the prediction controller runs online.
inline std::vector<MotionSample> motion_from_poses(std::span<const double> t, std::span<const Pose2> poses) {
  require(t.size() == poses.size(), "motion_from_poses: length mismatch");
  PoseResampler rs;
  MotionEstimator est;
  std::vector<MotionSample> out;
  for (std::size_t k = 0; k < t.size(); ++k) rs.feed(t[k], poses[k], [&](const Pose2& p) { out.push_back(est(p)); });
  return out;
}

inline std::vector<MotionSample> motion_from_log(const harness::TrialLog& log) {
  std::vector<double> t;
  std::vector<Pose2> p;
  for (const auto& s : log.steps) {
    t.push_back(s.t);
    p.push_back(s.pose);
  }
  return motion_from_poses(t, p);
}

/// CSV with header `t,vx,vy,vz,wx,wy,wz`, already at the motion rate.
inline std::vector<MotionSample> read_motion_csv(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), "motion csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "t,vx,vy,vz,wx,wy,wz", "motion csv: header must be t,vx,vy,vz,wx,wy,wz");
  std::vector<MotionSample> out;
  long lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    std::array<double, 7> v{};
    int n = 0;
    while (std::getline(ss, cell, ',')) {
      require(n < 7, "motion csv: too many columns on line " + std::to_string(lineno));
      try {
        std::size_t used = 0;
        v[static_cast<std::size_t>(n)] = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ValidationError("motion csv: bad number on line " + std::to_string(lineno));
      }
      ++n;
    }
    require(n == 7, "motion csv: expected 7 columns on line " + std::to_string(lineno));
    out.push_back({v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  return out;
}

/// Every `*.jsonl` trial log and `*.csv` motion file in `dir`, in name order.
inline std::vector<std::vector<MotionSample>> load_motion_dir(const std::filesystem::path& dir) {
  require(std::filesystem::is_directory(dir), "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".jsonl" || ext == ".csv")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::vector<MotionSample>> out;
  for (const auto& f : files) {
    if (f.extension() == ".jsonl") {
      out.push_back(motion_from_log(harness::load_log(f)));
    } else {
      std::ifstream is(f);
      out.push_back(read_motion_csv(is));
    }
  }
  return out;
}

}  // namespace cobench::intent
