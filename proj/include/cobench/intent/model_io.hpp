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

// Model container. Byte layout (all little-endian) is in docs/model_format.md.

#pragma once

#include "cobench/intent/lstm.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace cobench::intent {

inline constexpr char kModelMagic[8] = {'C', 'B', 'L', 'S', 'T', 'M', '\0', '\n'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

static_assert(std::endian::native == std::endian::little, "model files are written little-endian");

namespace detail {

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  require(is.good(), "model file truncated");
  return v;
}

}  // namespace detail

inline void write_model(std::ostream& os, const RecurrentModel& m) {
  m.validate();
  const auto& s = m.shape();
  os.write(kModelMagic, sizeof(kModelMagic));
  detail::put<std::uint32_t>(os, kModelFormatVersion);
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(s.channels));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(s.hidden));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(s.layers));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(s.window));
  detail::put<std::uint32_t>(os, s.input_layer ? 1u : 0u);
  detail::put<std::uint64_t>(os, m.seed());
  for (double v : m.scaler.mean) detail::put<double>(os, v);
  for (double v : m.scaler.std) detail::put<double>(os, v);
  const auto& p = m.parameters();
  detail::put<std::uint64_t>(os, static_cast<std::uint64_t>(p.size()));
  os.write(reinterpret_cast<const char*>(p.data()), static_cast<std::streamsize>(p.size() * sizeof(double)));
  require(os.good(), "model write failed");
}

inline RecurrentModel read_model(std::istream& is) {
  char magic[8];
  is.read(magic, sizeof(magic));
  require(is.good() && std::memcmp(magic, kModelMagic, sizeof(magic)) == 0, "not a cobench model file");
  const auto version = detail::get<std::uint32_t>(is);
  require(version == kModelFormatVersion, "unsupported model format version " + std::to_string(version));
  ModelShape s;
  s.channels = static_cast<int>(detail::get<std::uint32_t>(is));
  s.hidden = static_cast<int>(detail::get<std::uint32_t>(is));
  s.layers = static_cast<int>(detail::get<std::uint32_t>(is));
  s.window = static_cast<int>(detail::get<std::uint32_t>(is));
  s.input_layer = detail::get<std::uint32_t>(is) != 0;
  require(s.channels == kChannels, "model channel count must be 6");
  const auto seed = detail::get<std::uint64_t>(is);
  RecurrentModel m(s, seed);
  for (double& v : m.scaler.mean) v = detail::get<double>(is);
  for (double& v : m.scaler.std) v = detail::get<double>(is);
  const auto n = detail::get<std::uint64_t>(is);
  require(n == static_cast<std::uint64_t>(m.parameters().size()), "model payload size does not match its header");
  is.read(reinterpret_cast<char*>(m.parameters().data()), static_cast<std::streamsize>(n * sizeof(double)));
  require(is.good() || (is.eof() && is.gcount() == static_cast<std::streamsize>(n * sizeof(double))),
          "model file truncated");
  m.validate();
  return m;
}

inline void save_model(const std::filesystem::path& path, const RecurrentModel& m) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "cannot write " + path.string());
  write_model(os, m);
}

inline RecurrentModel load_model(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), "cannot open model " + path.string());
  return read_model(is);
}

/// Human-readable dump of the weights, for debugging only.
inline nlohmann::json model_to_json(const RecurrentModel& m) {
  using nlohmann::json;
  auto mat = [](const Eigen::Ref<const Eigen::MatrixXd>& a) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  const auto& s = m.shape();
  json j = {{"version", std::string(kModelVersion)},
            {"format_version", kModelFormatVersion},
            {"channels", s.channels},
            {"hidden", s.hidden},
            {"layers", s.layers},
            {"window", s.window},
            {"input_layer", s.input_layer},
            {"seed", m.seed()},
            {"mean", m.scaler.mean},
            {"std", m.scaler.std}};
  if (s.input_layer) j["input"] = {{"W", mat(m.w_in())}, {"b", mat(m.b_in())}};
  json layers = json::array();
  for (int l = 0; l < s.layers; ++l) layers.push_back({{"W", mat(m.w(l))}, {"U", mat(m.u(l))}, {"b", mat(m.b(l))}});
  j["lstm"] = layers;
  j["output"] = {{"W", mat(m.w_out())}, {"b", mat(m.b_out())}};
  return j;
}

}  // namespace cobench::intent
