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

// WebSocket endpoint for a live session. The simulation loop runs on its own
// thread in real time; socket I/O runs on another. They exchange only
// messages: client events in through a queue, serialized replies out through
// posts to the I/O context.

#pragma once

#include "cobench/harness/live.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <thread>
#include <variant>

namespace cobench::harness {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = boost::beast::websocket;

/// Simple multi-producer queue; the consumer drains everything at once.
template <typename T>
class MessageQueue {
 public:
  void push(T v) {
    std::lock_guard lock(mu_);
    q_.push_back(std::move(v));
  }

  std::deque<T> drain() {
    std::lock_guard lock(mu_);
    std::deque<T> out;
    out.swap(q_);
    return out;
  }

 private:
  std::mutex mu_;
  std::deque<T> q_;
};

namespace detail {

struct Connected {
  std::uint64_t id;
};
struct Disconnected {
  std::uint64_t id;
};
struct Text {
  std::uint64_t id;
  std::string body;
};
using ClientEvent = std::variant<Connected, Disconnected, Text>;

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(net::ip::tcp::socket sock, std::uint64_t id, MessageQueue<ClientEvent>& events,
             std::function<void(std::uint64_t)> on_close)
      : ws_(std::move(sock)), id_(id), events_(events), on_close_(std::move(on_close)) {}

  void start() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return self->close();
      self->events_.push(Connected{self->id_});
      self->read();
    });
  }

  // I/O thread only.
  void send(std::string text) {
    if (closed_) return;
    outbox_.push_back(std::move(text));
    if (outbox_.size() == 1) write();
  }

  void shutdown() {
    if (closed_) return;
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

  std::uint64_t id() const { return id_; }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->close();
      self->events_.push(Text{self->id_, beast::buffers_to_string(self->buffer_.data())});
      self->buffer_.consume(self->buffer_.size());
      self->read();
    });
  }

  void write() {
    ws_.text(true);
    ws_.async_write(net::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->close();
      self->outbox_.pop_front();
      if (!self->outbox_.empty()) self->write();
    });
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    outbox_.clear();
    events_.push(Disconnected{id_});
    on_close_(id_);
  }

  websocket::stream<beast::tcp_stream> ws_;
  std::uint64_t id_;
  MessageQueue<ClientEvent>& events_;
  std::function<void(std::uint64_t)> on_close_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  bool closed_ = false;
};

}  // namespace detail

/// One-client live server. A second client is refused while one is attached.
class Server {
 public:
  Server(BenchConfig config, std::shared_ptr<const intent::RecurrentModel> model = nullptr, LiveOptions opt = {})
      : session_(std::move(config), std::move(model), opt),
        acceptor_(io_, net::ip::tcp::endpoint(net::ip::make_address("127.0.0.1"),
                                              static_cast<unsigned short>(session_.config().port))) {}

  /// Listens on `port`; 0 picks a free port (see port()).
  Server(BenchConfig config, unsigned short port, std::shared_ptr<const intent::RecurrentModel> model = nullptr,
         LiveOptions opt = {})
      : session_(std::move(config), std::move(model), opt),
        acceptor_(io_, net::ip::tcp::endpoint(net::ip::make_address("127.0.0.1"), port)) {}

  ~Server() { stop(); }

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  unsigned short port() const { return acceptor_.local_endpoint().port(); }

  /// Starts the I/O and simulation threads and returns.
  void start() {
    require(!io_thread_.joinable(), "server already started");
    accept();
    io_thread_ = std::thread([this] { io_.run(); });
    sim_thread_ = std::thread([this] { simulate(); });
  }

  /// Blocks until stop() is called from elsewhere.
  void run() {
    start();
    std::unique_lock lock(wait_mu_);
    wait_cv_.wait(lock, [this] { return stopping_.load(); });
  }

  void stop() {
    if (!io_thread_.joinable()) return;
    {
      std::lock_guard lock(wait_mu_);
      stopping_ = true;
    }
    wait_cv_.notify_all();
    if (sim_thread_.joinable()) sim_thread_.join();
    net::post(io_, [this] {
      beast::error_code ec;
      acceptor_.close(ec);
      if (conn_) conn_->shutdown();
    });
    io_.stop();
    io_thread_.join();
  }

 private:
  void accept() {
    acceptor_.async_accept([this](beast::error_code ec, net::ip::tcp::socket sock) {
      if (ec) return;
      if (conn_) {
        beast::error_code ignored;
        sock.close(ignored);
      } else {
        conn_ = std::make_shared<detail::Connection>(std::move(sock), ++next_id_, events_, [this](std::uint64_t id) {
          if (conn_ && conn_->id() == id) conn_.reset();
        });
        conn_->start();
      }
      accept();
    });
  }

  // Hands serialized messages to the I/O thread for the given client.
  void deliver(std::uint64_t id, const std::vector<Json>& msgs) {
    if (msgs.empty()) return;
    auto texts = std::make_shared<std::vector<std::string>>();
    for (const auto& m : msgs) texts->push_back(m.dump());
    net::post(io_, [this, id, texts] {
      if (!conn_ || conn_->id() != id) return;
      for (auto& t : *texts) conn_->send(std::move(t));
    });
  }

  void simulate() {
    using clock = std::chrono::steady_clock;
    const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(session_.config().dt));
    auto next = clock::now();
    std::uint64_t client = 0;
    while (!stopping_) {
      for (auto& ev : events_.drain()) {
        if (auto* c = std::get_if<detail::Connected>(&ev)) {
          client = c->id;
          deliver(client, session_.connect());
        } else if (auto* d = std::get_if<detail::Disconnected>(&ev)) {
          if (d->id == client) {
            session_.disconnect();
            client = 0;
          }
        } else if (auto* t = std::get_if<detail::Text>(&ev)) {
          if (t->id == client) deliver(client, session_.receive_text(t->body));
        }
      }
      if (!session_.paused()) {
        auto out = session_.tick();
        if (client) deliver(client, out);
      }
      next += period;
      const auto now = clock::now();
      if (now - next > std::chrono::milliseconds(100)) next = now;  // fell behind; do not burst
      std::this_thread::sleep_until(next);
    }
  }

  LiveSession session_;  // simulation thread only
  MessageQueue<detail::ClientEvent> events_;
  net::io_context io_;
  net::ip::tcp::acceptor acceptor_;
  std::shared_ptr<detail::Connection> conn_;  // I/O thread only
  std::uint64_t next_id_ = 0;
  std::thread io_thread_, sim_thread_;
  std::atomic<bool> stopping_{false};
  std::mutex wait_mu_;
  std::condition_variable wait_cv_;
};

}  // namespace cobench::harness
