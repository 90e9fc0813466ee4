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


// Command-line front end: sim, corpus, train, eval, report, serve.

#include "cobench/cobench.hpp"
#include "cobench/harness/server.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace cobench;

namespace {

harness::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) std::_Exit(0);
}

harness::BenchConfig base_config(const std::string& path) {
  const char* env = std::getenv(harness::kConfigEnv);
  if (path.empty() && (env == nullptr || *env == '\0')) return {};
  return harness::load_config(path);
}

void write_motion_csv(const fs::path& p, const std::vector<MotionSample>& m) {
  std::ofstream os(p);
  require(os.good(), "cannot write " + p.string());
  os.precision(17);
  os << "t,vx,vy,vz,wx,wy,wz\n";
  for (std::size_t k = 0; k < m.size(); ++k) {
    os << static_cast<double>(k) / kPoseRateHz;
    for (double v : m[k]) os << ',' << v;
    os << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cobench: cooperative table-carrying bench"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "bench config JSON (overridden by $COBENCH_CONFIG)");

  // sim
  auto* sim = app.add_subcommand("sim", "run scripted trials and write logs, reports and summary.csv");
  std::vector<std::string> controllers;
  std::string task_path, out_dir, sim_model;
  std::optional<std::uint64_t> seed;
  int reps = 1;
  sim->add_option("--controller", controllers, "bmvic|evic|nnpc (repeatable)")
      ->check(CLI::IsMember({"bmvic", "evic", "nnpc"}));
  sim->add_option("--task", task_path, "task script (JSON array of tasks)");
  sim->add_option("--seed", seed, "base seed; repetition r uses seed + r");
  sim->add_option("--reps", reps, "repetitions per task")->check(CLI::NonNegativeNumber);
  sim->add_option("--out", out_dir, "output directory")->required();
  sim->add_option("--model", sim_model, "model file for nnpc");

  // corpus
  auto* corpus = app.add_subcommand("corpus", "generate a synthetic motion corpus as CSV files");
  harness::CorpusSpec cspec;
  std::string corpus_out;
  corpus->add_option("--trials", cspec.trials, "number of trials")->check(CLI::NonNegativeNumber);
  corpus->add_option("--seed", cspec.seed, "corpus seed");
  corpus->add_option("--noise", cspec.sensor_noise, "sensor noise (N)");
  corpus->add_option("--out", corpus_out, "output directory")->required();

  // train
  auto* tr = app.add_subcommand("train", "train the intent model");
  std::string data_dir, model_out;
  std::uint64_t train_seed = 11, split_seed = 7;
  intent::TrainingSchedule sched;
  intent::ModelShape shape;
  tr->add_option("--data", data_dir, "directory of trial logs (*.jsonl) or motion CSVs")->required();
  tr->add_option("--epochs", sched.epochs, "passes over the curriculum")->check(CLI::PositiveNumber);
  tr->add_option("--seed", train_seed, "training seed");
  tr->add_option("--split-seed", split_seed, "train/holdout split seed");
  tr->add_option("--model", model_out, "output model file")->required();
  tr->add_option("--threshold", sched.phase0_threshold, "phase-0 loss threshold");
  tr->add_option("--phases", sched.phases, "curriculum phases");
  tr->add_option("--iterations-per-phase", sched.iterations_per_phase, "iterations per phase");
  tr->add_option("--hidden", shape.hidden, "hidden units");
  tr->add_option("--layers", shape.layers, "recurrent layers");
  tr->add_option("--window", shape.window, "input window length");

  // eval
  auto* ev = app.add_subcommand("eval", "50-step rollout error of a model on a motion corpus");
  std::string eval_model, eval_data;
  int horizon = 50, stride = 200;
  ev->add_option("--model", eval_model, "model file")->required();
  ev->add_option("--data", eval_data, "directory of trial logs or motion CSVs")->required();
  ev->add_option("--horizon", horizon, "rollout length")->check(CLI::PositiveNumber);
  ev->add_option("--stride", stride, "window stride")->check(CLI::PositiveNumber);

  // report
  auto* rep = app.add_subcommand("report", "score saved logs and write the comparison CSV");
  std::string logs_dir, csv_out;
  rep->add_option("--logs", logs_dir, "directory of trial logs")->required();
  rep->add_option("--csv", csv_out, "output CSV")->required();

  // serve
  auto* srv = app.add_subcommand("serve", "live session over WebSocket");
  std::optional<int> port;
  std::string serve_controller, serve_model;
  srv->add_option("--port", port, "listen port (localhost)");
  srv->add_option("--controller", serve_controller, "bmvic|evic|nnpc")->check(CLI::IsMember({"bmvic", "evic", "nnpc"}));
  srv->add_option("--model", serve_model, "model file for nnpc");

  CLI11_PARSE(app, argc, argv);

  try {
    harness::BenchConfig config = base_config(config_path);

    if (*sim) {
      if (seed) config.seed = *seed;
      if (!config.seed) config.seed = 1;
      if (!sim_model.empty()) config.controller.model = sim_model;
      if (controllers.empty()) controllers.push_back(config.controller.type);
      std::vector<TaskSpec> tasks = task_path.empty() ? config.tasks : harness::load_task_script(task_path);
      std::shared_ptr<const intent::RecurrentModel> model;
      if (std::find(controllers.begin(), controllers.end(), "nnpc") != controllers.end()) {
        require(!config.controller.model.empty(), "nnpc needs --model or controller.model");
        model = std::make_shared<const intent::RecurrentModel>(intent::load_model(config.controller.model));
      }
      const auto summary = harness::run_batch(config, controllers, tasks, reps, out_dir, model);
      for (const auto& r : summary.reports) {
        std::cout << r.controller << " seed " << r.seed << " completed " << r.completed;
        if (r.completion_time) std::cout << " t_c " << *r.completion_time;
        std::cout << " final_error " << r.final_error << '\n';
      }
      for (const auto& f : summary.failures)
        std::cerr << "failed: " << f.controller << " task " << f.task_index << " rep " << f.repetition << ": "
                  << f.message << '\n';
      std::cout << summary.reports.size() << " trials, " << summary.failures.size() << " failures; summary in "
                << (fs::path(out_dir) / "summary.csv").string() << '\n';
      return summary.failures.empty() ? 0 : 2;
    }

    if (*corpus) {
      fs::create_directories(corpus_out);
      const auto data = harness::synthetic_motion_corpus(config, cspec);
      for (std::size_t i = 0; i < data.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "trial_%04zu.csv", i);
        write_motion_csv(fs::path(corpus_out) / name, data[i]);
      }
      std::cout << data.size() << " trials written to " << corpus_out << '\n';
      return 0;
    }

    if (*tr) {
      auto c = intent::Corpus::build(intent::load_motion_dir(data_dir), split_seed);
      std::cout << "corpus: " << c.train.size() << " train, " << c.validation.size() << " holdout trials\n";
      auto res = intent::train(c, shape, sched, train_seed, [](const intent::TrainingRecord& r) {
        if (r.iteration == 0 && (r.phase % 10 == 0))
          std::cout << "epoch " << r.epoch << " phase " << r.phase << " loss " << r.mean_loss << '\n';
      });
      std::cout << "phase 0 " << (res.phase0_converged ? "converged" : "stopped") << " after "
                << res.phase0_iterations << " iterations\n";
      intent::save_model(model_out, res.model);
      const auto score = intent::evaluate_rollouts(res.model, c);
      std::cout << "holdout rollout rmse " << score.model_rmse << " (persistence " << score.persistence_rmse
                << ", max |x| " << score.max_abs << ", " << score.windows << " windows)\n";
      return 0;
    }

    if (*ev) {
      const auto m = intent::load_model(eval_model);
      const auto c = intent::Corpus::holdout(intent::load_motion_dir(eval_data), m.scaler);
      const auto s = intent::evaluate_rollouts(m, c, horizon, stride);
      std::cout << Json{{"model_rmse", s.model_rmse},
                                 {"persistence_rmse", s.persistence_rmse},
                                 {"max_abs", s.max_abs},
                                 {"windows", s.windows}}
                       .dump(2)
                << '\n';
      return 0;
    }

    if (*rep) {
      const auto summary = harness::report_logs(logs_dir);
      std::ofstream os(csv_out);
      require(os.good(), "cannot write " + csv_out);
      baselines::write_comparison_csv(os, summary.rows);
      for (const auto& f : summary.failures) std::cerr << "skipped " << f.message << '\n';
      std::cout << summary.reports.size() << " logs scored into " << csv_out << '\n';
      return 0;
    }

    if (*srv) {
      if (port) config.port = *port;
      if (!serve_controller.empty()) config.controller.type = serve_controller;
      if (!serve_model.empty()) config.controller.model = serve_model;
      config.leader.source = "live";
      harness::Server server(config);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "serving " << config.controller.type << " on ws://127.0.0.1:" << server.port() << std::endl;
      server.run();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
