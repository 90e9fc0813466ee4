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

// Corpus handling, the iterated-prediction curriculum and rollout scoring.

#pragma once

#include "cobench/intent/lstm.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace cobench::intent {

/// Trials of raw motion, their standardized copies and a trial-level split.
/// Scaling constants come from the full set, before splitting.
struct Corpus {
  std::vector<std::vector<MotionSample>> raw;
  std::vector<std::vector<MotionSample>> standardized;
  Standardizer scaler;
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;

  /// Every trial held out, standardized with an existing model's scaler.
  static Corpus holdout(std::vector<std::vector<MotionSample>> trials, const Standardizer& scaler) {
    require(!trials.empty(), "Corpus: no trials");
    scaler.validate();
    Corpus c;
    c.raw = std::move(trials);
    c.scaler = scaler;
    for (const auto& t : c.raw) c.standardized.push_back(c.scaler.apply(std::span<const MotionSample>(t)));
    c.validation.resize(c.raw.size());
    std::iota(c.validation.begin(), c.validation.end(), std::size_t{0});
    return c;
  }

  static Corpus build(std::vector<std::vector<MotionSample>> trials, std::uint64_t seed,
                      double train_fraction = 0.75, bool warn = true) {
    require(!trials.empty(), "Corpus: no trials");
    require(train_fraction > 0.0 && train_fraction <= 1.0, "Corpus: train fraction must be in (0, 1]");
    Corpus c;
    c.raw = std::move(trials);
    c.scaler = Standardizer::fit(std::span<const std::vector<MotionSample>>(c.raw), warn);
    for (const auto& t : c.raw) c.standardized.push_back(c.scaler.apply(std::span<const MotionSample>(t)));

    std::vector<std::size_t> order(c.raw.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    std::size_t n_train = static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(order.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, order.size());
    if (n_train == order.size() && order.size() > 1 && train_fraction < 1.0) --n_train;
    c.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    c.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(c.train.begin(), c.train.end());
    std::sort(c.validation.begin(), c.validation.end());
    return c;
  }
};

struct TrainingSchedule {
  int batch_size = 32;
  double learning_rate = 1e-3;
  double clip_norm = 5.0;
  double phase0_threshold = 0.05;  // mean squared residual per element
  int phase0_average = 20;         // batches averaged for the threshold test
  int phase0_max_iterations = 4000;
  int phases = 50;
  int iterations_per_phase = 8;
  int epochs = 1;

  void validate() const {
    require(batch_size >= 1, "batch size must be >= 1");
    require(learning_rate > 0.0 && clip_norm > 0.0, "learning rate and clip norm must be positive");
    require(phase0_threshold > 0.0 && phase0_average >= 1 && phase0_max_iterations >= 1,
            "phase-0 settings must be positive");
    require(phases >= 0 && iterations_per_phase >= 1 && epochs >= 1, "curriculum sizes must be positive");
  }
};

/// Windows plus one-step targets. `predicted` counts the trailing steps of
/// each window that are model output rather than data.
struct TrainingBatch {
  BatchWindow inputs;
  Eigen::MatrixXd targets;
  int predicted = 0;
};

struct TrainingRecord {
  int epoch = 0;
  int phase = 0;
  int iteration = 0;
  double loss = 0.0;       // summed over batch and channels
  double mean_loss = 0.0;  // per element
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive-moment optimizer with global gradient-norm clipping.
class Adam {
 public:
  Adam(Eigen::Index n, double lr, double clip, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : m_(Eigen::VectorXd::Zero(n)), v_(Eigen::VectorXd::Zero(n)), lr_(lr), clip_(clip), b1_(beta1), b2_(beta2),
        eps_(eps) {}

  void step(Eigen::VectorXd& params, Eigen::VectorXd grad) {
    const double norm = grad.norm();
    if (norm > clip_) grad *= clip_ / norm;
    ++t_;
    m_ = b1_ * m_ + (1.0 - b1_) * grad;
    v_ = b2_ * v_ + (1.0 - b2_) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(b1_, t_);
    const double c2 = 1.0 - std::pow(b2_, t_);
    params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
  }

 private:
  Eigen::VectorXd m_, v_;
  double lr_, clip_, b1_, b2_, eps_;
  int t_ = 0;
};

/// Uniform sampler over every window start in the training trials that
/// leaves room for `max_predicted` rolled steps plus a target.
class WindowSampler {
 public:
  WindowSampler(const Corpus& c, int window, int max_predicted, std::uint64_t seed) : corpus_(c), rng_(seed) {
    const std::size_t need = static_cast<std::size_t>(window + max_predicted + 1);
    for (std::size_t i : c.train) {
      const auto& tr = c.standardized[i];
      if (tr.size() < need) continue;
      trials_.push_back(i);
      total_ += tr.size() - need + 1;
      cumulative_.push_back(total_);
    }
    require(total_ > 0, "training trials are too short for the window and horizon");
  }

  std::pair<std::size_t, std::size_t> draw() {
    const std::size_t r = static_cast<std::size_t>(rng_() % total_);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
    const std::size_t k = static_cast<std::size_t>(it - cumulative_.begin());
    const std::size_t before = k == 0 ? 0 : cumulative_[k - 1];
    return {trials_[k], r - before};
  }

 private:
  const Corpus& corpus_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> trials_;
  std::vector<std::size_t> cumulative_;
  std::size_t total_ = 0;
};

/// Column b of the batch is trial[start + t]; the window is then rolled
/// forward `predicted` steps with the model's own output and the target is
/// the real sample that follows.
inline TrainingBatch make_batch(const RecurrentModel& m, const Corpus& c,
                                const std::vector<std::pair<std::size_t, std::size_t>>& picks, int predicted) {
  const int W = m.shape().window;
  const Eigen::Index B = static_cast<Eigen::Index>(picks.size());
  std::vector<Eigen::MatrixXd> steps(static_cast<std::size_t>(W), Eigen::MatrixXd(kChannels, B));
  TrainingBatch out;
  out.targets.resize(kChannels, B);
  for (Eigen::Index b = 0; b < B; ++b) {
    const auto& tr = c.standardized[picks[static_cast<std::size_t>(b)].first];
    const std::size_t s = picks[static_cast<std::size_t>(b)].second;
    for (int t = 0; t < W; ++t)
      for (int ch = 0; ch < kChannels; ++ch) steps[static_cast<std::size_t>(t)](ch, b) = tr[s + t][ch];
    for (int ch = 0; ch < kChannels; ++ch)
      out.targets(ch, b) = tr[s + static_cast<std::size_t>(W + predicted)][ch];
  }
  out.inputs = BatchWindow(std::move(steps));
  if (predicted > 0) iterated_predict(m, out.inputs, predicted);
  out.predicted = predicted;
  return out;
}

struct TrainingResult {
  RecurrentModel model;
  std::vector<TrainingRecord> history;
  int phase0_iterations = 0;
  bool phase0_converged = false;
};

/// Phase 0 trains on data-only windows until the running mean loss falls
/// under the threshold. Each later phase k pairs an original batch with one
/// whose last k steps are the model's own iterated predictions.
inline TrainingResult train(const Corpus& corpus, const ModelShape& shape, const TrainingSchedule& sched,
                            std::uint64_t seed,
                            const std::function<void(const TrainingRecord&)>& progress = {}) {
  sched.validate();
  TrainingResult r;
  r.model = RecurrentModel::initialize(shape, seed);
  r.model.scaler = corpus.scaler;
  WindowSampler sampler(corpus, shape.window, sched.phases, seed ^ 0x9e3779b97f4a7c15ULL);
  Adam opt(r.model.parameters().size(), sched.learning_rate, sched.clip_norm);
  const double per_batch = static_cast<double>(sched.batch_size * kChannels);

  std::deque<double> recent;
  Eigen::VectorXd grad, total;
  auto draw = [&] {
    std::vector<std::pair<std::size_t, std::size_t>> picks;
    for (int b = 0; b < sched.batch_size; ++b) picks.push_back(sampler.draw());
    return picks;
  };
  auto record = [&](int epoch, int phase, int it, double loss, double elems) {
    TrainingRecord rec{epoch, phase, it, loss, loss / elems};
    if (!std::isfinite(loss)) {
      std::ostringstream os;
      os << "training diverged at epoch " << epoch << " phase " << phase << " iteration " << it
         << "; recent mean losses:";
      for (double v : recent) os << ' ' << v;
      throw TrainingDiverged(os.str());
    }
    r.history.push_back(rec);
    if (progress) progress(rec);
    return rec;
  };

  for (int epoch = 0; epoch < sched.epochs; ++epoch) {
    if (epoch == 0) {
      for (int it = 0; it < sched.phase0_max_iterations; ++it) {
        const TrainingBatch b = make_batch(r.model, corpus, draw(), 0);
        const double loss = loss_and_gradient(r.model, b.inputs, b.targets, grad);
        const auto rec = record(epoch, 0, it, loss, per_batch);
        opt.step(r.model.parameters(), grad);
        recent.push_back(rec.mean_loss);
        if (static_cast<int>(recent.size()) > sched.phase0_average) recent.pop_front();
        r.phase0_iterations = it + 1;
        if (static_cast<int>(recent.size()) == sched.phase0_average &&
            std::accumulate(recent.begin(), recent.end(), 0.0) / sched.phase0_average < sched.phase0_threshold) {
          r.phase0_converged = true;
          break;
        }
      }
    }
    for (int phase = 1; phase <= sched.phases; ++phase) {
      for (int it = 0; it < sched.iterations_per_phase; ++it) {
        const TrainingBatch orig = make_batch(r.model, corpus, draw(), 0);
        const TrainingBatch rolled = make_batch(r.model, corpus, draw(), phase);
        double loss = loss_and_gradient(r.model, orig.inputs, orig.targets, total);
        loss += loss_and_gradient(r.model, rolled.inputs, rolled.targets, grad);
        total += grad;
        const auto rec = record(epoch, phase, it, loss, 2.0 * per_batch);
        recent.push_back(rec.mean_loss);
        if (static_cast<int>(recent.size()) > sched.phase0_average) recent.pop_front();
        opt.step(r.model.parameters(), total);
      }
    }
  }
  return r;
}

struct RolloutScore {
  double model_rmse = 0.0;        // standardized units, all channels and steps
  double persistence_rmse = 0.0;  // repeat-last-sample baseline
  double max_abs = 0.0;           // largest predicted magnitude on any channel
  std::size_t windows = 0;
};

/// Scores `horizon`-step iterated predictions on the validation trials
/// against the data that followed each window.
inline RolloutScore evaluate_rollouts(const RecurrentModel& m, const Corpus& c, int horizon = 50, int stride = 200,
                                      int batch = 64) {
  require(horizon >= 1 && stride >= 1 && batch >= 1, "evaluate_rollouts: sizes must be positive");
  const int W = m.shape().window;
  std::vector<std::pair<std::size_t, std::size_t>> picks;
  for (std::size_t i : c.validation) {
    const auto& tr = c.standardized[i];
    for (std::size_t s = 0; s + static_cast<std::size_t>(W + horizon) <= tr.size(); s += static_cast<std::size_t>(stride))
      picks.push_back({i, s});
  }
  RolloutScore score;
  score.windows = picks.size();
  if (picks.empty()) return score;
  double se_model = 0.0, se_persist = 0.0;
  for (std::size_t first = 0; first < picks.size(); first += static_cast<std::size_t>(batch)) {
    const std::size_t n = std::min(picks.size() - first, static_cast<std::size_t>(batch));
    std::vector<Eigen::MatrixXd> steps(static_cast<std::size_t>(W), Eigen::MatrixXd(kChannels, n));
    for (std::size_t b = 0; b < n; ++b) {
      const auto& tr = c.standardized[picks[first + b].first];
      const std::size_t s = picks[first + b].second;
      for (int t = 0; t < W; ++t)
        for (int ch = 0; ch < kChannels; ++ch) steps[static_cast<std::size_t>(t)](ch, static_cast<Eigen::Index>(b)) = tr[s + t][ch];
    }
    BatchWindow x(std::move(steps));
    const Eigen::MatrixXd last = x.at(W - 1);
    const auto pred = iterated_predict(m, x, horizon);
    for (std::size_t b = 0; b < n; ++b) {
      const auto& tr = c.standardized[picks[first + b].first];
      const std::size_t s = picks[first + b].second;
      for (int k = 0; k < horizon; ++k) {
        const auto& truth = tr[s + static_cast<std::size_t>(W + k)];
        for (int ch = 0; ch < kChannels; ++ch) {
          const double p = pred[static_cast<std::size_t>(k)](ch, static_cast<Eigen::Index>(b));
          se_model += (p - truth[ch]) * (p - truth[ch]);
          const double q = last(ch, static_cast<Eigen::Index>(b));
          se_persist += (q - truth[ch]) * (q - truth[ch]);
          score.max_abs = std::isfinite(p) ? std::max(score.max_abs, std::abs(p)) : HUGE_VAL;
        }
      }
    }
  }
  const double count = static_cast<double>(picks.size()) * horizon * kChannels;
  score.model_rmse = std::sqrt(se_model / count);
  score.persistence_rmse = std::sqrt(se_persist / count);
  return score;
}

}  // namespace cobench::intent
