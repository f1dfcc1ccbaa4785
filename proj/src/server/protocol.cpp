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

#include "lambdahand/server/protocol.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "lambdahand/params_io.hpp"
#include "lambdahand/scenario/scenario.hpp"

namespace lambdahand::server {

namespace {

std::optional<CommandKind> parse_kind(const std::string& s) {
  static const std::pair<const char*, CommandKind> kinds[] = {
      {"set_activation", CommandKind::SetActivation}, {"set_motion", CommandKind::SetMotion},
      {"load_preset", CommandKind::LoadPreset},       {"start_scenario", CommandKind::StartScenario},
      {"pause", CommandKind::Pause},                  {"resume", CommandKind::Resume},
      {"reset", CommandKind::Reset}};
  for (const auto& [text, kind] : kinds) {
    if (s == text) return kind;
  }
  return std::nullopt;
}

double unit_interval(const nlohmann::json& msg, const char* key) {
  const auto it = msg.find(key);
  if (it == msg.end() || !it->is_number()) {
    throw ProtocolViolation("bad_field", fmt::format("'{}' must be a number", key));
  }
  const double v = it->get<double>();
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw ProtocolViolation("out_of_range", fmt::format("'{}' = {} outside [0, 1]", key, v));
  }
  return v;
}

std::string name_field(const nlohmann::json& msg, const std::vector<std::string>& allowed,
                       const char* what) {
  const auto it = msg.find("name");
  if (it == msg.end() || !it->is_string()) {
    throw ProtocolViolation("bad_field", "'name' must be a string");
  }
  const std::string name = it->get<std::string>();
  if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
    throw ProtocolViolation("unknown_name", fmt::format("unknown {} '{}'", what, name));
  }
  return name;
}

}  // namespace

std::string_view to_string(Role role) noexcept {
  return role == Role::Controller ? "controller" : "observer";
}

std::string_view to_string(CommandKind kind) noexcept {
  switch (kind) {
    case CommandKind::SetActivation:
      return "set_activation";
    case CommandKind::SetMotion:
      return "set_motion";
    case CommandKind::LoadPreset:
      return "load_preset";
    case CommandKind::StartScenario:
      return "start_scenario";
    case CommandKind::Pause:
      return "pause";
    case CommandKind::Resume:
      return "resume";
    case CommandKind::Reset:
      return "reset";
  }
  return "unknown";
}

Hello parse_hello(const nlohmann::json& msg) {
  if (!msg.is_object() || msg.value("type", "") != "hello") {
    throw ProtocolViolation("bad_hello", "first message must be a hello");
  }
  const auto v = msg.find("protocol_version");
  if (v == msg.end() || !v->is_number_integer()) {
    throw ProtocolViolation("bad_hello", "hello needs an integer protocol_version");
  }
  Hello h;
  h.protocol_version = v->get<int>();
  const std::string role = msg.value("role", "controller");
  if (role == "controller") {
    h.role = Role::Controller;
  } else if (role == "observer") {
    h.role = Role::Observer;
  } else {
    throw ProtocolViolation("bad_hello", fmt::format("unknown role '{}'", role));
  }
  return h;
}

Command parse_command(const nlohmann::json& msg) {
  if (!msg.is_object()) throw ProtocolViolation("bad_message", "message must be an object");
  const auto type = msg.find("type");
  if (type == msg.end() || !type->is_string()) {
    throw ProtocolViolation("bad_message", "message needs a string 'type'");
  }
  const auto kind = parse_kind(type->get<std::string>());
  if (!kind) {
    throw ProtocolViolation("unknown_type",
                            fmt::format("unknown message type '{}'", type->get<std::string>()));
  }
  const auto seq = msg.find("sequence");
  if (seq == msg.end() || !seq->is_number_integer()) {
    throw ProtocolViolation("bad_field", "'sequence' must be an integer");
  }
  Command cmd;
  cmd.kind = *kind;
  cmd.sequence = seq->get<std::int64_t>();
  if (const auto ts = msg.find("timestamp"); ts != msg.end()) {
    if (!ts->is_number()) throw ProtocolViolation("bad_field", "'timestamp' must be a number");
    cmd.timestamp = ts->get<double>();
  }
  switch (cmd.kind) {
    case CommandKind::SetActivation:
      cmd.alpha_flex = unit_interval(msg, "alpha_flex");
      cmd.alpha_ext = unit_interval(msg, "alpha_ext");
      break;
    case CommandKind::SetMotion: {
      const auto m = msg.find("motion");
      if (m == msg.end() || m->is_null()) break;
      if (!m->is_string()) throw ProtocolViolation("bad_field", "'motion' must be a string or null");
      cmd.motion = parse_direction(m->get<std::string>());
      if (!cmd.motion) {
        throw ProtocolViolation("bad_field",
                                fmt::format("unknown motion '{}'", m->get<std::string>()));
      }
      break;
    }
    case CommandKind::LoadPreset:
      cmd.name = name_field(msg, builtin_preset_names(), "preset");
      break;
    case CommandKind::StartScenario:
      cmd.name = name_field(msg, scenario::bundled_scenario_names(), "scenario");
      break;
    case CommandKind::Pause:
    case CommandKind::Resume:
    case CommandKind::Reset:
      break;
  }
  return cmd;
}

nlohmann::json to_json(const Command& cmd) {
  nlohmann::json doc{{"type", std::string(to_string(cmd.kind))}, {"sequence", cmd.sequence}};
  if (cmd.timestamp) doc["timestamp"] = *cmd.timestamp;
  switch (cmd.kind) {
    case CommandKind::SetActivation:
      doc["alpha_flex"] = cmd.alpha_flex;
      doc["alpha_ext"] = cmd.alpha_ext;
      break;
    case CommandKind::SetMotion:
      doc["motion"] = cmd.motion ? nlohmann::json(std::string(to_string(*cmd.motion)))
                                 : nlohmann::json(nullptr);
      break;
    case CommandKind::LoadPreset:
    case CommandKind::StartScenario:
      doc["name"] = cmd.name;
      break;
    default:
      break;
  }
  return doc;
}

nlohmann::json to_json(const SessionDescriptor& d) {
  return {{"type", "session"},
          {"protocol_version", d.protocol_version},
          {"preset", d.preset},
          {"joint_count", d.joint_names.size()},
          {"joint_names", d.joint_names},
          {"presets", d.presets},
          {"scenarios", d.scenarios},
          {"tick", d.tick},
          {"role", std::string(to_string(d.role))}};
}

nlohmann::json to_json(const Telemetry& t) {
  nlohmann::json joints = nlohmann::json::array();
  for (const auto& j : t.joints) {
    joints.push_back({{"name", j.name},
                      {"theta", j.theta},
                      {"theta_dot", j.theta_dot},
                      {"theta_eq", j.theta_eq},
                      {"theta0", j.theta0},
                      {"tau_flex", j.tau_flex},
                      {"tau_ext", j.tau_ext},
                      {"gate", j.gate}});
  }
  return {{"type", "telemetry"},
          {"tick", t.tick},
          {"t", t.t},
          {"preset", t.preset},
          {"joints", joints},
          {"gate_flex", t.gate_flex},
          {"gate_ext", t.gate_ext},
          {"motion", std::string(to_string(t.motion))},
          {"alpha_flex", t.alpha_flex},
          {"alpha_ext", t.alpha_ext},
          {"last_sequence", t.last_sequence},
          {"paused", t.paused},
          {"scenario", t.scenario.empty() ? nlohmann::json(nullptr) : nlohmann::json(t.scenario)},
          {"overrun", t.overrun}};
}

Telemetry telemetry_from_json(const nlohmann::json& doc) {
  Telemetry t;
  t.tick = doc.at("tick").get<std::uint64_t>();
  t.t = doc.at("t").get<double>();
  t.preset = doc.at("preset").get<std::string>();
  for (const auto& j : doc.at("joints")) {
    t.joints.push_back({j.at("name").get<std::string>(), j.at("theta").get<double>(),
                        j.at("theta_dot").get<double>(), j.at("theta_eq").get<double>(),
                        j.at("theta0").get<double>(), j.at("tau_flex").get<double>(),
                        j.at("tau_ext").get<double>(), j.at("gate").get<int>()});
  }
  t.gate_flex = doc.at("gate_flex").get<int>();
  t.gate_ext = doc.at("gate_ext").get<int>();
  t.motion = parse_direction(doc.at("motion").get<std::string>()).value_or(Direction::NoMotion);
  t.alpha_flex = doc.at("alpha_flex").get<double>();
  t.alpha_ext = doc.at("alpha_ext").get<double>();
  t.last_sequence = doc.at("last_sequence").get<std::int64_t>();
  t.paused = doc.at("paused").get<bool>();
  if (!doc.at("scenario").is_null()) t.scenario = doc.at("scenario").get<std::string>();
  t.overrun = doc.at("overrun").get<bool>();
  return t;
}

nlohmann::json error_message(const ProtocolError& err, std::optional<std::int64_t> sequence) {
  nlohmann::json doc{{"type", "error"}, {"code", err.code}, {"message", err.message}};
  if (sequence) doc["sequence"] = *sequence;
  return doc;
}

}  // namespace lambdahand::server
