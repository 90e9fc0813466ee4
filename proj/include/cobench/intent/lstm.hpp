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

// Stacked LSTM over a motion window, read out at the last step.
//
// All weights live in one flat vector so the optimizer, the gradient check
// and the model file all see the same layout:
//
//   [W_in (H x C), b_in (H)]                       only when input_layer
//   per layer l: [W_l (4H x in_l), U_l (4H x H), b_l (4H)]
//   [W_out (C x H), b_out (C)]
//
// Matrices are column-major. Gate rows are ordered input, forget,
// candidate, output.

#pragma once

#include "cobench/common.hpp"
#include "cobench/intent/standardize.hpp"
#include "cobench/intent/window.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cobench::intent {

inline constexpr std::string_view kModelVersion = "cobench-lstm-1";

struct ModelShape {
  int channels = kChannels;
  int hidden = 32;
  int layers = 2;
  int window = kDefaultWindow;
  bool input_layer = true;  // dense + ReLU in front of the first LSTM layer

  void validate() const {
    require(channels >= 1, "model channels must be >= 1");
    require(hidden >= 1, "model hidden size must be >= 1");
    require(layers >= 1, "model needs at least one recurrent layer");
    require(window >= 1, "model window must be >= 1");
  }

  /// Three layers of 100 units; the default is a smaller desk-sized net.
  static ModelShape full_size() {
    ModelShape s;
    s.hidden = 100;
    s.layers = 3;
    return s;
  }

  bool operator==(const ModelShape&) const = default;
};

struct LayerSlots {
  Eigen::Index w = 0, u = 0, b = 0;
  int in = 0;
};

struct ParameterLayout {
  Eigen::Index w_in = 0, b_in = 0;
  std::vector<LayerSlots> layers;
  Eigen::Index w_out = 0, b_out = 0;
  Eigen::Index total = 0;
};

inline ParameterLayout parameter_layout(const ModelShape& s) {
  s.validate();
  ParameterLayout p;
  Eigen::Index at = 0;
  const Eigen::Index h = s.hidden, c = s.channels;
  if (s.input_layer) {
    p.w_in = at;
    at += h * c;
    p.b_in = at;
    at += h;
  }
  for (int l = 0; l < s.layers; ++l) {
    LayerSlots L;
    L.in = (l == 0 && !s.input_layer) ? s.channels : s.hidden;
    L.w = at;
    at += 4 * h * L.in;
    L.u = at;
    at += 4 * h * h;
    L.b = at;
    at += 4 * h;
    p.layers.push_back(L);
  }
  p.w_out = at;
  at += c * h;
  p.b_out = at;
  at += c;
  p.total = at;
  return p;
}

namespace detail {

using CMap = Eigen::Map<const Eigen::MatrixXd>;
using Map = Eigen::Map<Eigen::MatrixXd>;

inline Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& a) {
  return (1.0 + (-a.array()).exp()).inverse().matrix();
}

/// Uniform in [-k, k) from 53 random bits; independent of the standard
/// library's distribution implementations.
inline double uniform(std::mt19937_64& rng, double k) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return (2.0 * u - 1.0) * k;
}

}  // namespace detail

class RecurrentModel {
 public:
  RecurrentModel() : RecurrentModel(ModelShape{}) {}

  /// All-zero weights.
  explicit RecurrentModel(const ModelShape& shape, std::uint64_t seed = 0)
      : shape_(shape), layout_(parameter_layout(shape)), seed_(seed), params_(Eigen::VectorXd::Zero(layout_.total)) {}

  /// Seeded uniform initialisation; forget-gate biases start at 1.
  static RecurrentModel initialize(const ModelShape& shape, std::uint64_t seed) {
    RecurrentModel m(shape, seed);
    std::mt19937_64 rng(seed);
    const auto& L = m.layout_;
    const Eigen::Index h = shape.hidden;
    auto fill = [&](Eigen::Index at, Eigen::Index n, double k) {
      for (Eigen::Index i = 0; i < n; ++i) m.params_[at + i] = detail::uniform(rng, k);
    };
    if (shape.input_layer) fill(L.w_in, h * shape.channels, std::sqrt(6.0 / shape.channels));
    const double k = 1.0 / std::sqrt(static_cast<double>(h));
    for (const auto& s : L.layers) {
      fill(s.w, 4 * h * s.in, k);
      fill(s.u, 4 * h * h, k);
      m.params_.segment(s.b + h, h).setOnes();
    }
    fill(L.w_out, shape.channels * h, k);
    return m;
  }

  const ModelShape& shape() const { return shape_; }
  const ParameterLayout& layout() const { return layout_; }
  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t s) { seed_ = s; }

  Eigen::VectorXd& parameters() { return params_; }
  const Eigen::VectorXd& parameters() const { return params_; }

  Standardizer scaler;

  detail::CMap w_in() const { return cmap(layout_.w_in, shape_.hidden, shape_.channels); }
  detail::CMap b_in() const { return cmap(layout_.b_in, shape_.hidden, 1); }
  detail::CMap w(int l) const { return cmap(layout_.layers[l].w, 4 * shape_.hidden, layout_.layers[l].in); }
  detail::CMap u(int l) const { return cmap(layout_.layers[l].u, 4 * shape_.hidden, shape_.hidden); }
  detail::CMap b(int l) const { return cmap(layout_.layers[l].b, 4 * shape_.hidden, 1); }
  detail::CMap w_out() const { return cmap(layout_.w_out, shape_.channels, shape_.hidden); }
  detail::CMap b_out() const { return cmap(layout_.b_out, shape_.channels, 1); }

  void validate() const {
    shape_.validate();
    require(params_.size() == parameter_layout(shape_).total, "model parameter count does not match its shape");
    require(params_.allFinite(), "model parameters must be finite");
    scaler.validate();
  }

  bool operator==(const RecurrentModel& o) const {
    return shape_ == o.shape_ && seed_ == o.seed_ && scaler == o.scaler && params_.size() == o.params_.size() &&
           params_ == o.params_;
  }

 private:
  detail::CMap cmap(Eigen::Index at, Eigen::Index r, Eigen::Index c) const {
    return detail::CMap(params_.data() + at, r, c);
  }

  ModelShape shape_;
  ParameterLayout layout_;
  std::uint64_t seed_ = 0;
  Eigen::VectorXd params_;
};

/// A batch of windows stored step-major: steps[t] is channels x batch.
/// Shifting drops the oldest step and appends a new one without copying
/// the rest.
class BatchWindow {
 public:
  BatchWindow() = default;
  explicit BatchWindow(std::vector<Eigen::MatrixXd> steps) : steps_(std::move(steps)) {}

  int length() const { return static_cast<int>(steps_.size()); }
  int batch() const { return steps_.empty() ? 0 : static_cast<int>(steps_.front().cols()); }
  const Eigen::MatrixXd& at(int t) const { return steps_[(head_ + static_cast<std::size_t>(t)) % steps_.size()]; }

  void shift_in(const Eigen::MatrixXd& next) {
    steps_[head_] = next;
    head_ = (head_ + 1) % steps_.size();
  }

  static BatchWindow from(const PredictionWindow& w) {
    std::vector<Eigen::MatrixXd> s;
    for (int k = 0; k < w.size(); ++k) {
      Eigen::MatrixXd col(kChannels, 1);
      for (int c = 0; c < kChannels; ++c) col(c, 0) = w.at(k)[static_cast<std::size_t>(c)];
      s.push_back(col);
    }
    return BatchWindow(std::move(s));
  }

 private:
  std::vector<Eigen::MatrixXd> steps_;
  std::size_t head_ = 0;
};

/// One-step-ahead prediction for every window in the batch.
inline Eigen::MatrixXd forward(const RecurrentModel& m, const BatchWindow& x) {
  const auto& s = m.shape();
  require(x.length() >= 1, "forward: empty window");
  const Eigen::Index batch = x.batch();
  std::vector<Eigen::MatrixXd> h(s.layers, Eigen::MatrixXd::Zero(s.hidden, batch));
  std::vector<Eigen::MatrixXd> c(s.layers, Eigen::MatrixXd::Zero(s.hidden, batch));
  const Eigen::Index H = s.hidden;
  Eigen::MatrixXd z, a;
  for (int t = 0; t < x.length(); ++t) {
    require(x.at(t).rows() == s.channels && x.at(t).cols() == batch, "forward: window shape mismatch");
    if (s.input_layer) z = ((m.w_in() * x.at(t)).colwise() + m.b_in().col(0)).cwiseMax(0.0);
    for (int l = 0; l < s.layers; ++l) {
      const Eigen::MatrixXd& in = l > 0 ? h[l - 1] : (s.input_layer ? z : x.at(t));
      a.noalias() = m.w(l) * in;
      a.noalias() += m.u(l) * h[l];
      a.colwise() += m.b(l).col(0);
      a.topRows(2 * H).array() = (1.0 + (-a.topRows(2 * H).array()).exp()).inverse();
      a.middleRows(2 * H, H).array() = a.middleRows(2 * H, H).array().tanh();
      a.bottomRows(H).array() = (1.0 + (-a.bottomRows(H).array()).exp()).inverse();
      c[l].array() = a.middleRows(H, H).array() * c[l].array() + a.topRows(H).array() * a.middleRows(2 * H, H).array();
      h[l].array() = a.bottomRows(H).array() * c[l].array().tanh();
    }
  }
  return (m.w_out() * h.back()).colwise() + m.b_out().col(0);
}

inline MotionSample forward(const RecurrentModel& m, const PredictionWindow& w) {
  require(w.warm(), "forward: prediction window is not warm");
  const Eigen::MatrixXd y = forward(m, BatchWindow::from(w));
  MotionSample out;
  for (int c = 0; c < kChannels; ++c) out[static_cast<std::size_t>(c)] = y(c, 0);
  return out;
}

/// Rolls the horizon forward by appending each prediction to the window and
/// dropping the oldest step. `x` ends holding the final shifted window.
inline std::vector<Eigen::MatrixXd> iterated_predict(const RecurrentModel& m, BatchWindow& x, int horizon) {
  require(horizon >= 1, "iterated_predict: horizon must be >= 1");
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(horizon));
  for (int k = 0; k < horizon; ++k) {
    out.push_back(forward(m, x));
    x.shift_in(out.back());
  }
  return out;
}

inline std::vector<MotionSample> iterated_predict(const RecurrentModel& m, const PredictionWindow& w,
                                                  int horizon = 50) {
  require(w.warm(), "iterated_predict: prediction window is not warm");
  BatchWindow x = BatchWindow::from(w);
  std::vector<MotionSample> out;
  for (const auto& y : iterated_predict(m, x, horizon)) {
    MotionSample s;
    for (int c = 0; c < kChannels; ++c) s[static_cast<std::size_t>(c)] = y(c, 0);
    out.push_back(s);
  }
  return out;
}

/// Sum of squared residuals over the batch (and channels); not averaged.
inline double mse(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets) {
  require(predictions.rows() == targets.rows() && predictions.cols() == targets.cols(),
          "mse: predictions and targets differ in shape");
  return (predictions - targets).squaredNorm();
}

inline double mse(std::span<const double> predictions, std::span<const double> targets) {
  require(predictions.size() == targets.size(), "mse: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    s += (predictions[i] - targets[i]) * (predictions[i] - targets[i]);
  return s;
}

/// Loss of the batch against `targets` and its gradient with respect to
/// every parameter, by backpropagation through time. `grad` is overwritten.
inline double loss_and_gradient(const RecurrentModel& m, const BatchWindow& x, const Eigen::MatrixXd& targets,
                                Eigen::VectorXd& grad) {
  const auto& s = m.shape();
  const auto& layout = m.layout();
  const int T = x.length();
  const Eigen::Index B = x.batch();
  const Eigen::Index H = s.hidden;
  require(T >= 1, "loss_and_gradient: empty window");
  require(targets.rows() == s.channels && targets.cols() == B, "loss_and_gradient: target shape mismatch");

  struct Step {
    Eigen::MatrixXd i, f, g, o, c, tc, h;
  };
  std::vector<Eigen::MatrixXd> zpre(s.input_layer ? T : 0), z(s.input_layer ? T : 0);
  std::vector<std::vector<Step>> cache(s.layers, std::vector<Step>(T));
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(H, B);

  auto input_of = [&](int l, int t) -> const Eigen::MatrixXd& {
    if (l > 0) return cache[l - 1][t].h;
    return s.input_layer ? z[t] : x.at(t);
  };

  Eigen::MatrixXd a;
  for (int t = 0; t < T; ++t) {
    if (s.input_layer) {
      zpre[t] = (m.w_in() * x.at(t)).colwise() + m.b_in().col(0);
      z[t] = zpre[t].cwiseMax(0.0);
    }
    for (int l = 0; l < s.layers; ++l) {
      const Eigen::MatrixXd& hp = t > 0 ? cache[l][t - 1].h : zero;
      const Eigen::MatrixXd& cp = t > 0 ? cache[l][t - 1].c : zero;
      a.noalias() = m.w(l) * input_of(l, t);
      a.noalias() += m.u(l) * hp;
      a.colwise() += m.b(l).col(0);
      Step& st = cache[l][t];
      st.i = detail::sigmoid(a.topRows(H));
      st.f = detail::sigmoid(a.middleRows(H, H));
      st.g = a.middleRows(2 * H, H).array().tanh().matrix();
      st.o = detail::sigmoid(a.bottomRows(H));
      st.c = st.f.cwiseProduct(cp) + st.i.cwiseProduct(st.g);
      st.tc = st.c.array().tanh().matrix();
      st.h = st.o.cwiseProduct(st.tc);
    }
  }

  const Eigen::MatrixXd& top = cache[s.layers - 1][T - 1].h;
  const Eigen::MatrixXd y = (m.w_out() * top).colwise() + m.b_out().col(0);
  const double loss = mse(y, targets);

  grad.setZero(layout.total);
  const Eigen::MatrixXd dy = 2.0 * (y - targets);
  detail::Map(grad.data() + layout.w_out, s.channels, H).noalias() += dy * top.transpose();
  grad.segment(layout.b_out, s.channels) += dy.rowwise().sum();

  std::vector<Eigen::MatrixXd> dh_next(s.layers, zero), dc_next(s.layers, zero);
  Eigen::MatrixXd dtop = m.w_out().transpose() * dy;
  Eigen::MatrixXd da(4 * H, B), dup;
  for (int t = T - 1; t >= 0; --t) {
    for (int l = s.layers - 1; l >= 0; --l) {
      const Step& st = cache[l][t];
      const Eigen::MatrixXd& hp = t > 0 ? cache[l][t - 1].h : zero;
      const Eigen::MatrixXd& cp = t > 0 ? cache[l][t - 1].c : zero;
      Eigen::MatrixXd dh = dh_next[l];
      if (l == s.layers - 1) {
        if (t == T - 1) dh += dtop;
      } else {
        dh += dup;
      }
      const Eigen::ArrayXXd dc =
          dh.array() * st.o.array() * (1.0 - st.tc.array().square()) + dc_next[l].array();
      da.topRows(H) = (dc * st.g.array() * st.i.array() * (1.0 - st.i.array())).matrix();
      da.middleRows(H, H) = (dc * cp.array() * st.f.array() * (1.0 - st.f.array())).matrix();
      da.middleRows(2 * H, H) = (dc * st.i.array() * (1.0 - st.g.array().square())).matrix();
      da.bottomRows(H) = (dh.array() * st.tc.array() * st.o.array() * (1.0 - st.o.array())).matrix();
      dc_next[l] = (dc * st.f.array()).matrix();

      const LayerSlots& ls = layout.layers[l];
      detail::Map(grad.data() + ls.w, 4 * H, ls.in).noalias() += da * input_of(l, t).transpose();
      detail::Map(grad.data() + ls.u, 4 * H, H).noalias() += da * hp.transpose();
      grad.segment(ls.b, 4 * H) += da.rowwise().sum();
      dh_next[l].noalias() = m.u(l).transpose() * da;
      if (l > 0 || s.input_layer) dup.noalias() = m.w(l).transpose() * da;
    }
    if (s.input_layer) {
      const Eigen::MatrixXd dz = (zpre[t].array() > 0.0).select(dup, 0.0);
      detail::Map(grad.data() + layout.w_in, H, s.channels).noalias() += dz * x.at(t).transpose();
      grad.segment(layout.b_in, H) += dz.rowwise().sum();
    }
  }
  return loss;
}

}  // namespace cobench::intent
