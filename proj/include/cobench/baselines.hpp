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

// Published human-dyad and robot-follower reference numbers, kept verbatim
// (value plus its printed text) for comparison reports.

#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cobench::baselines {

struct Figure {
  double value;
  std::string_view text;
};

/// Blind human-human dyads, mean and standard deviation per task type.
struct BlindDyadStat {
  std::string_view metric;
  Figure mean_rotation;
  Figure mean_translation;
  Figure std_rotation;
  Figure std_translation;
};

inline constexpr std::array<BlindDyadStat, 5> kBlindDyadStats = {{
    {"MJ Err", {392.71, "392.71"}, {149.91, "149.91"}, {391.7, "391.7"}, {87.65, "87.65"}},
    {"t_c", {7.08, "7.08"}, {7.18, "7.18"}, {2.9, "2.9"}, {1.62, "1.62"}},
    {"v_y,avg", {0.17, "0.17"}, {0.18, "0.18"}, {0.06, "0.06"}, {0.04, "0.04"}},
    {"w_z,avg", {0.26, "0.26"}, {0.004, "0.004"}, {0.09, "0.09"}, {0.003, "0.003"}},
    {"dtau_z", {488454.4, "488454.4"}, {387937.6, "387937.6"}, {560601.9, "560601.9"}, {281393.2, "281393.2"}},
}};

/// One row of the controller comparison table (metric x task type).
struct ComparisonRow {
  std::string_view metric;   // e.g. "Completion Time (s)"
  std::string_view task;     // "Rotation" or "Translation"
  Figure blind_hhi;
  Figure evic;
  Figure nnpc;
  Figure sighted_hhi;
};

inline constexpr std::array<ComparisonRow, 6> kControllerComparison = {{
    {"Completion Time (s)", "Rotation", {7.08, "7.08"}, {8.25, "8.25"}, {8.26, "8.26"}, {6.58, "6.58"}},
    {"Completion Time (s)", "Translation", {7.18, "7.18"}, {7.91, "7.91"}, {7.75, "7.75"}, {4.93, "4.93"}},
    {"MJE (rads)", "Rotation", {392.71, "392.71"}, {96.44, "96.44"}, {87.38, "87.38"}, {344.70, "344.70"}},
    {"MJE (m)", "Translation", {149.91, "149.91"}, {50.24, "50.24"}, {48.51, "48.51"}, {98.92, "98.92"}},
    {"MTM (N^2*m^2/s^2)", "Rotation",
     {488454.38, "488454.38"}, {65602.60, "65602.60"}, {12770.75, "12770.75"}, {341253.43, "341253.43"}},
    {"MTM (N^2*m^2/s^2)", "Translation",
     {387937.56, "387937.56"}, {48191.90, "48191.90"}, {15220.89, "15220.89"}, {151758.83, "151758.83"}},
}};

/// Average interaction-to-external force ratio reported for the human
/// dyads. Reference only; the bench reports its own value.
inline constexpr Figure kInteractionToExternalRatio = {20.0, "20"};

/// Controller thresholds and targets the bench defaults are taken from.
inline constexpr Figure kTauZThreshold = {3.0, "3.0"};
inline constexpr Figure kTauXThreshold = {1.5, "1.5"};
inline constexpr Figure kLateralTargetSpeed = {0.35, "0.35"};
inline constexpr Figure kRotationTargetSpeed = {0.4, "0.4"};

inline constexpr std::string_view kComparisonHeader = "metric,task,blind_hhi,evic,nnpc,sighted_hhi";

/// A comparison row whose controller columns may come from bench runs.
struct ReportRow {
  std::string metric;
  std::string task;
  std::string blind_hhi;
  std::string evic;
  std::string nnpc;
  std::string sighted_hhi;
};

inline std::vector<ReportRow> comparison_fixture_rows() {
  std::vector<ReportRow> rows;
  for (const auto& r : kControllerComparison)
    rows.push_back({std::string(r.metric), std::string(r.task), std::string(r.blind_hhi.text),
                    std::string(r.evic.text), std::string(r.nnpc.text), std::string(r.sighted_hhi.text)});
  return rows;
}

inline void write_comparison_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
  os << kComparisonHeader << '\n';
  for (const auto& r : rows)
    os << r.metric << ',' << r.task << ',' << r.blind_hhi << ',' << r.evic << ',' << r.nnpc << ','
       << r.sighted_hhi << '\n';
}

}  // namespace cobench::baselines
