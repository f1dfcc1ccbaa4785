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

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

namespace lambdahand::server {

struct ServerConfig {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  std::string preset = "wrist";
  std::optional<std::string> autoplay;  // bundled scenario started at launch
  // Wall-clock speed-up of the fixed-rate loop. The simulated tick stays
  // 5 ms; values above 1 only shorten the real sleep between ticks.
  double speed = 1.0;
  std::size_t queue_capacity = 4096;
  std::size_t max_client_backlog = 8192;  // queued outgoing messages per client
};

// WebSocket server around a SessionCore. One network thread handles all
// clients; one control thread runs the fixed-rate loop. They exchange
// commands and telemetry through a pair of single-producer/single-consumer
// queues.
class SimServer {
 public:
  explicit SimServer(ServerConfig config);
  ~SimServer();

  SimServer(const SimServer&) = delete;
  SimServer& operator=(const SimServer&) = delete;

  // Binds and starts both threads. Throws ConfigError on bad settings or
  // std::system_error when the port cannot be bound.
  void start();
  // Idempotent; joins both threads.
  void stop();
  // Blocks until stop() is called from another thread.
  void wait();

  unsigned short port() const noexcept;

  // Counters for inspection.
  std::size_t telemetry_sent() const noexcept;
  std::size_t overruns() const noexcept;

  struct Impl;  // opaque

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace lambdahand::server
