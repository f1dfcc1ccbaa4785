// Copyright 2026 The lambdahand Authors
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

#include "lambdahand/server/server.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <boost/lockfree/spsc_queue.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "lambdahand/errors.hpp"
#include "lambdahand/server/session.hpp"

namespace lambdahand::server {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

class Client;

}  // namespace

struct SimServer::Impl {
  explicit Impl(ServerConfig c)
      : cfg(std::move(c)), ingress(cfg.queue_capacity), egress(cfg.queue_capacity) {}

  ServerConfig cfg;
  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  boost::lockfree::spsc_queue<Command> ingress;
  boost::lockfree::spsc_queue<Telemetry> egress;
  std::unique_ptr<SessionCore> core;  // owned by the control thread once started

  std::thread net_thread;
  std::thread loop_thread;
  std::atomic<bool> stopping{false};
  std::atomic<bool> drain_pending{false};
  std::atomic<std::size_t> sent{0};
  std::atomic<std::size_t> overruns{0};
  std::atomic<std::size_t> dropped{0};
  unsigned short bound_port = 0;
  bool started = false;

  std::mutex wait_mu;
  std::condition_variable wait_cv;
  bool stopped = false;

  // Network thread only.
  std::set<std::shared_ptr<Client>> clients;
  std::weak_ptr<Client> controller;
  std::string current_preset;

  void do_accept();
  void on_message(const std::shared_ptr<Client>& client, const std::string& text);
  void remove(const std::shared_ptr<Client>& client);
  void broadcast_pending();
  void notify();
  void loop();
  SessionDescriptor descriptor(Role role) const;
};

namespace {

class Client : public std::enable_shared_from_this<Client> {
 public:
  Client(tcp::socket socket, SimServer::Impl& server)
      : ws_(std::move(socket)), server_(server) {}

  bool ready = false;
  Role role = Role::Observer;
  std::int64_t last_sequence = std::numeric_limits<std::int64_t>::min();

  void run() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.text(true);
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) {
        spdlog::debug("websocket accept failed: {}", ec.message());
        self->server_.remove(self);
        return;
      }
      self->do_read();
    });
  }

  void send(std::shared_ptr<const std::string> msg) {
    if (closed_) return;
    if (queue_.size() >= server_.cfg.max_client_backlog) {
      ++dropped_;
      return;
    }
    queue_.push_back(std::move(msg));
    if (queue_.size() == 1) do_write();
  }

  void send(const nlohmann::json& doc) { send(std::make_shared<const std::string>(doc.dump())); }

  // Sends what is queued, then closes the connection.
  void close_after_flush() {
    close_pending_ = true;
    if (queue_.empty()) do_close();
  }

  void shutdown() {
    closed_ = true;
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->server_.remove(self);
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->server_.on_message(self, text);
      if (!self->closed_ && !self->close_pending_) self->do_read();
    });
  }

  void do_write() {
    ws_.async_write(net::buffer(*queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) {
                        self->server_.remove(self);
                        return;
                      }
                      self->queue_.pop_front();
                      if (!self->queue_.empty()) {
                        self->do_write();
                      } else if (self->close_pending_) {
                        self->do_close();
                      }
                    });
  }

  void do_close() {
    if (closed_) return;
    closed_ = true;
    ws_.async_close(websocket::close_code::normal,
                    [self = shared_from_this()](beast::error_code) { self->server_.remove(self); });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  SimServer::Impl& server_;
  bool close_pending_ = false;
  bool closed_ = false;
  std::size_t dropped_ = 0;
};

}  // namespace

SessionDescriptor SimServer::Impl::descriptor(Role role) const {
  SessionDescriptor d;
  const ParamSet p = builtin_preset(current_preset);
  d.preset = p.name;
  for (const auto& j : p.joints) d.joint_names.push_back(j.name);
  d.presets = builtin_preset_names();
  d.scenarios = scenario::bundled_scenario_names();
  d.tick = kControlTick;
  d.role = role;
  return d;
}

void SimServer::Impl::do_accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) {
      if (ec != net::error::operation_aborted) spdlog::warn("accept: {}", ec.message());
      if (!acceptor.is_open()) return;
    } else {
      auto client = std::make_shared<Client>(std::move(socket), *this);
      clients.insert(client);
      client->run();
    }
    do_accept();
  });
}

void SimServer::Impl::remove(const std::shared_ptr<Client>& client) {
  if (clients.erase(client) == 0) return;
  client->shutdown();
  if (controller.lock() == client) {
    controller.reset();
    spdlog::info("controller disconnected");
  }
}

void SimServer::Impl::on_message(const std::shared_ptr<Client>& client, const std::string& text) {
  nlohmann::json msg;
  try {
    msg = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    client->send(error_message({"bad_json", e.what()}));
    return;
  }

  if (!client->ready) {
    Hello hello;
    try {
      hello = parse_hello(msg);
    } catch (const ProtocolViolation& e) {
      client->send(error_message({e.code(), e.what()}));
      return;
    }
    if (hello.protocol_version < kMinProtocolVersion ||
        hello.protocol_version > kMaxProtocolVersion) {
      auto doc = error_message(
          {"incompatible_version",
           fmt::format("protocol version {} not supported", hello.protocol_version)});
      doc["supported"] = {{"min", kMinProtocolVersion}, {"max", kMaxProtocolVersion}};
      client->send(doc);
      client->close_after_flush();
      return;
    }
    Role role = Role::Observer;
    bool demoted = false;
    if (hello.role == Role::Controller) {
      if (controller.expired()) {
        role = Role::Controller;
        controller = client;
      } else {
        demoted = true;
      }
    }
    client->role = role;
    client->ready = true;
    auto doc = to_json(descriptor(role));
    if (demoted) doc["notice"] = "controller role already taken; connected read-only";
    client->send(doc);
    spdlog::info("client connected as {}", to_string(role));
    return;
  }

  std::optional<std::int64_t> seq;
  if (msg.is_object()) {
    if (const auto it = msg.find("sequence"); it != msg.end() && it->is_number_integer()) {
      seq = it->get<std::int64_t>();
    }
  }
  Command cmd;
  try {
    if (msg.is_object() && msg.value("type", "") == "hello") {
      throw ProtocolViolation("already_greeted", "hello already received");
    }
    cmd = parse_command(msg);
  } catch (const ProtocolViolation& e) {
    client->send(error_message({e.code(), e.what()}, seq));
    return;
  }
  if (client->role != Role::Controller) {
    client->send(error_message({"read_only", "observers cannot send commands"}, seq));
    return;
  }
  if (cmd.sequence <= client->last_sequence) {
    client->send(error_message(
        {"stale_sequence", fmt::format("sequence {} not above {}", cmd.sequence,
                                       client->last_sequence)},
        seq));
    return;
  }
  if (!ingress.push(cmd)) {
    client->send(error_message({"busy", "command queue full"}, seq));
    return;
  }
  client->last_sequence = cmd.sequence;
  if (cmd.kind == CommandKind::LoadPreset) current_preset = cmd.name;
  if (cmd.kind == CommandKind::StartScenario) {
    current_preset = scenario::bundled_scenario(cmd.name).preset;
  }
  client->send(nlohmann::json{
      {"type", "ack"}, {"sequence", cmd.sequence}, {"command", std::string(to_string(cmd.kind))}});
}

void SimServer::Impl::notify() {
  if (drain_pending.exchange(true)) return;
  net::post(ioc, [this] {
    drain_pending.store(false);
    broadcast_pending();
  });
}

void SimServer::Impl::broadcast_pending() {
  Telemetry t;
  while (egress.pop(t)) {
    const auto msg = std::make_shared<const std::string>(to_json(t).dump());
    for (const auto& c : clients) {
      if (c->ready) c->send(msg);
    }
    sent.fetch_add(1, std::memory_order_relaxed);
  }
}

void SimServer::Impl::loop() {
  using clock = std::chrono::steady_clock;
  const auto period = std::chrono::duration_cast<clock::duration>(
      std::chrono::duration<double>(kControlTick / cfg.speed));
  auto next = clock::now();
  bool overrun = false;
  Command cmd;
  while (!stopping.load(std::memory_order_acquire)) {
    while (ingress.pop(cmd)) {
      try {
        core->apply(cmd);
      } catch (const std::exception& e) {
        spdlog::error("command {} failed: {}", cmd.sequence, e.what());
      }
    }
    if (auto tel = core->tick()) {
      tel->overrun = overrun;
      overrun = false;
      if (egress.push(*tel)) {
        notify();
      } else {
        dropped.fetch_add(1, std::memory_order_relaxed);
      }
    }
    next += period;
    const auto now = clock::now();
    if (now > next + period) {
      overruns.fetch_add(1, std::memory_order_relaxed);
      spdlog::warn("control loop overran by {:.3f} ms",
                   std::chrono::duration<double, std::milli>(now - next).count());
      overrun = true;
      next = now;
    }
    std::this_thread::sleep_until(next);
  }
}

SimServer::SimServer(ServerConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

SimServer::~SimServer() { stop(); }

void SimServer::start() {
  Impl& s = *impl_;
  if (s.started) return;
  if (!(s.cfg.speed > 0.0)) throw ConfigError("server speed must be positive");
  if (s.cfg.queue_capacity < 2) throw ConfigError("queue capacity too small");
  try {
    s.core = std::make_unique<SessionCore>(s.cfg.preset);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  s.current_preset = s.cfg.preset;
  if (s.cfg.autoplay) {
    Command play;
    play.kind = CommandKind::StartScenario;
    play.name = *s.cfg.autoplay;
    try {
      s.core->apply(play);
      s.current_preset = scenario::bundled_scenario(play.name).preset;
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }

  const tcp::endpoint ep(net::ip::make_address(s.cfg.address), s.cfg.port);
  s.acceptor.open(ep.protocol());
  s.acceptor.set_option(net::socket_base::reuse_address(true));
  s.acceptor.bind(ep);
  s.acceptor.listen(net::socket_base::max_listen_connections);
  s.bound_port = s.acceptor.local_endpoint().port();
  s.do_accept();

  s.started = true;
  s.net_thread = std::thread([&s] { s.ioc.run(); });
  s.loop_thread = std::thread([&s] { s.loop(); });
  spdlog::info("serving preset '{}' on ws://{}:{}", s.cfg.preset, s.cfg.address, s.bound_port);
}

void SimServer::stop() {
  Impl& s = *impl_;
  if (!s.started) return;
  s.started = false;
  s.stopping.store(true, std::memory_order_release);
  if (s.loop_thread.joinable()) s.loop_thread.join();
  net::post(s.ioc, [&s] {
    beast::error_code ec;
    s.acceptor.close(ec);
    for (const auto& c : s.clients) c->shutdown();
    s.clients.clear();
    s.ioc.stop();
  });
  if (s.net_thread.joinable()) s.net_thread.join();
  {
    std::lock_guard lock(s.wait_mu);
    s.stopped = true;
  }
  s.wait_cv.notify_all();
}

void SimServer::wait() {
  std::unique_lock lock(impl_->wait_mu);
  impl_->wait_cv.wait(lock, [this] { return impl_->stopped; });
}

unsigned short SimServer::port() const noexcept { return impl_->bound_port; }

std::size_t SimServer::telemetry_sent() const noexcept { return impl_->sent.load(); }

std::size_t SimServer::overruns() const noexcept { return impl_->overruns.load(); }

}  // namespace lambdahand::server
