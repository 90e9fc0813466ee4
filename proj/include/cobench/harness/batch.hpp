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

// Batch experiments: controllers x tasks x repetitions, per-trial artifacts
// and a comparison-table summary.

#pragma once

#include "cobench/baselines.hpp"
#include "cobench/harness/log_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace cobench::harness {

struct BatchFailure {
  std::string controller;
  std::size_t task_index = 0;
  int repetition = 0;
  std::string message;
};

struct BatchSummary {
  std::vector<MetricsReport> reports;
  std::vector<BatchFailure> failures;
  std::vector<std::string> artifacts;  // log and report paths, in run order
  std::vector<baselines::ReportRow> rows;
};

namespace detail {

inline std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline bool is_rotation(const TaskSpec& t) { return t.kind == TaskKind::PlanarRotation; }

// Mean of one metric over a controller's trials of one task type; empty when
// no trial contributes.
template <typename F>
std::string column(const std::vector<MetricsReport>& reports, const std::string& controller, bool rotation, F&& f) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : reports) {
    if (r.controller != controller || is_rotation(r.task) != rotation) continue;
    const auto v = f(r);
    if (!v) continue;
    sum += *v;
    ++n;
  }
  return n ? fixed2(sum / n) : std::string();
}

}  // namespace detail

/// Comparison rows with the human fixtures and the bench's own EVIC and NNPC
/// means. Completion time averages completed trials only.
inline std::vector<baselines::ReportRow> summarize(const std::vector<MetricsReport>& reports) {
  auto rows = baselines::comparison_fixture_rows();
  for (auto& row : rows) {
    const bool rotation = row.task == "Rotation";
    auto pick = [&](const MetricsReport& r) -> std::optional<double> {
      if (row.metric.rfind("Completion", 0) == 0) {
        if (!r.completed || !r.completion_time) return std::nullopt;
        return *r.completion_time;
      }
      if (row.metric.rfind("MJE", 0) == 0) return r.mje;
      return r.mtm;
    };
    row.evic = detail::column(reports, "evic", rotation, pick);
    row.nnpc = detail::column(reports, "nnpc", rotation, pick);
  }
  return rows;
}

inline std::string trial_stem(const std::string& controller, std::size_t task_index, int rep) {
  return controller + "_task" + std::to_string(task_index) + "_rep" + std::to_string(rep);
}

/// Runs every controller on every task `repetitions` times with seeds
/// base, base+1, ... Failed trials are recorded and skipped. When `out_dir` is
/// non-empty, writes `<stem>.jsonl`, `<stem>.json` and `summary.csv` there.
inline BatchSummary run_batch(const BenchConfig& config, const std::vector<std::string>& controllers,
                              const std::vector<TaskSpec>& tasks, int repetitions,
                              const std::filesystem::path& out_dir = {},
                              std::shared_ptr<const intent::RecurrentModel> model = nullptr) {
  require(repetitions >= 0, "repetitions must be non-negative");
  BatchSummary out;
  if (tasks.empty()) std::clog << "warning: empty task script; nothing to run\n";
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  const std::uint64_t base = config.seed.value_or(0);
  for (const auto& controller : controllers) {
    BenchConfig c = config;
    c.controller.type = controller;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      for (int rep = 0; rep < repetitions; ++rep) {
        c.seed = base + static_cast<std::uint64_t>(rep);
        try {
          auto shared = controller == "nnpc" ? model : nullptr;
          TrialResult r = run_trial(c, tasks[i], shared);
          if (!out_dir.empty()) {
            const std::string stem = trial_stem(controller, i, rep);
            const auto log_path = out_dir / (stem + ".jsonl");
            const auto rep_path = out_dir / (stem + ".json");
            save_log(log_path, r.log);
            std::ofstream os(rep_path);
            os << report_json(r.report).dump(2) << '\n';
            out.artifacts.push_back(log_path.string());
            out.artifacts.push_back(rep_path.string());
          }
          out.reports.push_back(std::move(r.report));
        } catch (const std::exception& e) {
          out.failures.push_back({controller, i, rep, e.what()});
        }
      }
    }
  }
  out.rows = summarize(out.reports);
  if (!out_dir.empty()) {
    std::ofstream os(out_dir / "summary.csv");
    baselines::write_comparison_csv(os, out.rows);
    require(os.good(), "cannot write summary.csv");
  }
  return out;
}

/// Re-scores every `*.jsonl` log in `dir` (name order) and summarizes them.
inline BatchSummary report_logs(const std::filesystem::path& dir) {
  require(std::filesystem::is_directory(dir), "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  BatchSummary out;
  if (files.empty()) std::clog << "warning: no trial logs in " << dir.string() << '\n';
  for (const auto& f : files) {
    try {
      out.reports.push_back(rescore(load_log(f)));
      out.artifacts.push_back(f.string());
    } catch (const std::exception& e) {
      out.failures.push_back({"", 0, 0, f.string() + ": " + e.what()});
    }
  }
  out.rows = summarize(out.reports);
  return out;
}

}  // namespace cobench::harness
