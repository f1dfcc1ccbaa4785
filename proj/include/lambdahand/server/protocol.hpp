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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lambdahand/direction.hpp"

namespace lambdahand::server {

inline constexpr int kProtocolVersion = 1;
inline constexpr int kMinProtocolVersion = 1;
inline constexpr int kMaxProtocolVersion = 1;

enum class Role { Controller, Observer };
std::string_view to_string(Role role) noexcept;

// Rejection sent back to the client; the loop never sees the offending message.
struct ProtocolError {
  std::string code;
  std::string message;
};

class ProtocolViolation : public std::runtime_error {
 public:
  ProtocolViolation(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct Hello {
  int protocol_version = 0;
  Role role = Role::Controller;
};

// Throws ProtocolViolation ("bad_hello") when the message is not a hello or
// lacks a version. The version itself is checked by the caller.
Hello parse_hello(const nlohmann::json& msg);

enum class CommandKind { SetActivation, SetMotion, LoadPreset, StartScenario, Pause, Resume, Reset };
std::string_view to_string(CommandKind kind) noexcept;

struct Command {
  CommandKind kind = CommandKind::SetActivation;
  std::int64_t sequence = 0;
  std::optional<double> timestamp;  // client clock, informational
  double alpha_flex = 0.0;          // set_activation
  double alpha_ext = 0.0;           // set_activation
  std::optional<Direction> motion;  // set_motion; empty clears the override
  std::string name;                 // load_preset, start_scenario
};

// Validates kind, sequence, numeric ranges and names. Throws ProtocolViolation.
Command parse_command(const nlohmann::json& msg);
nlohmann::json to_json(const Command& cmd);

struct SessionDescriptor {
  int protocol_version = kProtocolVersion;
  std::string preset;
  std::vector<std::string> joint_names;
  std::vector<std::string> presets;
  std::vector<std::string> scenarios;
  double tick = 0.0;
  Role role = Role::Controller;
};
nlohmann::json to_json(const SessionDescriptor& d);

struct JointTelemetry {
  std::string name;
  double theta = 0.0;      // rad, anatomical
  double theta_dot = 0.0;  // rad/s
  double theta_eq = 0.0;   // rad
  double theta0 = 0.0;     // rad
  double tau_flex = 0.0;   // N m
  double tau_ext = 0.0;    // N m
  int gate = 0;
};

// State after one control tick. t is the time at the end of the tick.
struct Telemetry {
  std::uint64_t tick = 0;
  double t = 0.0;
  std::string preset;
  std::vector<JointTelemetry> joints;
  int gate_flex = 0;
  int gate_ext = 0;
  Direction motion = Direction::NoMotion;
  double alpha_flex = 0.0;
  double alpha_ext = 0.0;
  std::int64_t last_sequence = -1;
  bool paused = false;
  std::string scenario;  // empty when none is playing
  bool overrun = false;
};

nlohmann::json to_json(const Telemetry& t);
Telemetry telemetry_from_json(const nlohmann::json& doc);

nlohmann::json error_message(const ProtocolError& err,
                             std::optional<std::int64_t> sequence = std::nullopt);

}  // namespace lambdahand::server
