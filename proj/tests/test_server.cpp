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


#include "cobench/harness/server.hpp"

#include <gtest/gtest.h>

#include <chrono>

namespace cobench::harness {
namespace {

using tcp = net::ip::tcp;
using Clock = std::chrono::steady_clock;

BenchConfig server_config() {
  BenchConfig c;
  c.seed = 1;
  TaskSpec t;
  t.kind = TaskKind::LateralTranslation;
  t.direction = Direction::Left;
  t.magnitude = 1.0;
  c.tasks = {t};
  return c;
}

class Client {
 public:
  explicit Client(unsigned short port) : ws_(io_) {
    tcp::resolver resolver(io_);
    net::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    ws_.handshake("127.0.0.1", "/");
  }

  Json read() {
    beast::flat_buffer buf;
    ws_.read(buf);
    return Json::parse(beast::buffers_to_string(buf.data()));
  }

  /// Next message of the given type, skipping others.
  Json read(const std::string& type) {
    for (;;) {
      Json j = read();
      if (j.at("type") == type) return j;
    }
  }

  void send(const Json& j) {
    ws_.text(true);
    ws_.write(net::buffer(j.dump()));
  }

  void close() { ws_.close(websocket::close_code::normal); }

 private:
  net::io_context io_;
  websocket::stream<tcp::socket> ws_;
};

TEST(Server, ConfigEchoAndStateRate) {
  Server server(server_config(), 0);
  server.start();
  Client c(server.port());
  const Json hello = c.read();
  EXPECT_EQ(hello["type"], "config");
  EXPECT_EQ(hello["task"]["magnitude"], 1.0);

  c.read("state");
  const auto t0 = Clock::now();
  Json last;
  for (int k = 0; k < 30; ++k) last = c.read("state");
  const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
  EXPECT_GE(30.0 / wall, 30.0);
  EXPECT_GT(last["t"].get<double>(), 0.5);
  for (const char* key : {"pose", "twist", "torque", "force", "mode", "cmd", "coord", "step", "seq"})
    EXPECT_TRUE(last.contains(key)) << key;
  c.close();
  server.stop();
}

TEST(Server, ForceReachesSimulation) {
  Server server(server_config(), 0);
  server.start();
  Client c(server.port());
  c.read("config");
  long seq = 0;
  Json s;
  for (int k = 0; k < 40; ++k) {
    c.send({{"type", "force"}, {"seq", ++seq}, {"left", {-4.0, 0.0, 0.0}}, {"right", {4.0, 0.0, 0.0}}});
    s = c.read("state");
  }
  // Handles push forward and twist the board; the sensor sees the reaction.
  EXPECT_GT(std::abs(s["torque"][2].get<double>()), 1.0);
  c.send({{"type", "force"}, {"seq", 1}, {"left", {0, 0, 0}}, {"right", {0, 0, 0}}});
  const Json e = c.read("error");
  EXPECT_NE(e["message"].get<std::string>().find("stale"), std::string::npos);
  c.close();
  server.stop();
}

TEST(Server, SecondClientRefused) {
  Server server(server_config(), 0);
  server.start();
  Client first(server.port());
  first.read("config");
  EXPECT_ANY_THROW({
    Client second(server.port());
    second.read();
  });
  first.read("state");
  first.close();
  server.stop();
}

TEST(Server, StopWithoutClients) {
  Server server(server_config(), 0);
  server.start();
  EXPECT_GT(server.port(), 0);
  server.stop();
  server.stop();
}

}  // namespace
}  // namespace cobench::harness
