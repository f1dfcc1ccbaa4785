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

#include "lambdahand/server/session.hpp"

namespace lambdahand::server {

SessionCore::SessionCore(const std::string& preset) { load(preset); }

void SessionCore::load(const std::string& preset) {
  preset_ = builtin_preset(preset);
  joints_.clear();
  for (const auto& p : preset_.joints) joints_.emplace_back(p);
  reset_state();
}

void SessionCore::reset_state() {
  for (auto& j : joints_) j.reset();
  alpha_flex_ = 0.0;
  alpha_ext_ = 0.0;
  motion_override_.reset();
  paused_ = false;
  tick_index_ = 0;
  scenario_name_.clear();
  scenario_inputs_ = {};
  scenario_pos_ = 0;
}

void SessionCore::apply(const Command& cmd) {
  last_sequence_ = cmd.sequence;
  switch (cmd.kind) {
    case CommandKind::SetActivation:
      alpha_flex_ = cmd.alpha_flex;
      alpha_ext_ = cmd.alpha_ext;
      break;
    case CommandKind::SetMotion:
      motion_override_ = cmd.motion;
      break;
    case CommandKind::LoadPreset:
      load(cmd.name);
      break;
    case CommandKind::StartScenario: {
      const scenario::Scenario s = scenario::bundled_scenario(cmd.name);
      load(s.preset);
      scenario_inputs_ = scenario::prepare_inputs(s);
      scenario_name_ = cmd.name;
      break;
    }
    case CommandKind::Pause:
      paused_ = true;
      break;
    case CommandKind::Resume:
      paused_ = false;
      break;
    case CommandKind::Reset:
      reset_state();
      break;
  }
}

MuscleActivation SessionCore::pending_activation() const {
  if (!scenario_name_.empty() && scenario_pos_ < scenario_inputs_.activations.size()) {
    return scenario_inputs_.activations[scenario_pos_];
  }
  if (!motion_override_) return classify_by_dominance(alpha_flex_, alpha_ext_);
  switch (*motion_override_) {
    case Direction::Flexion:
      return MuscleActivation::make(alpha_flex_, 0.0, Direction::Flexion);
    case Direction::Extension:
      return MuscleActivation::make(0.0, alpha_ext_, Direction::Extension);
    case Direction::NoMotion:
      break;
  }
  return {};
}

std::optional<Telemetry> SessionCore::tick() {
  if (paused_) return std::nullopt;
  const MuscleActivation act = pending_activation();
  Telemetry tel;
  tel.tick = tick_index_;
  tel.t = static_cast<double>(tick_index_ + 1) * kControlTick;
  tel.preset = preset_.name;
  tel.motion = act.direction;
  tel.alpha_flex = act.alpha_flex;
  tel.alpha_ext = act.alpha_ext;
  tel.last_sequence = last_sequence_;
  tel.scenario = scenario_name_;
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    const TickOutput& out = joints_[i].tick(act, kControlTick);
    const JointState& js = joints_[i].joint();
    tel.joints.push_back({preset_.joints[i].name, anatomical_from_model(js.theta),
                          anatomical_from_model(js.theta_dot),
                          anatomical_from_model(out.theta_eq), anatomical_from_model(out.theta0),
                          out.torque.tau_flex, out.torque.tau_ext, out.gate.c_plus});
  }
  if (!joints_.empty()) {
    tel.gate_flex = joints_.front().state().gate_flex;
    tel.gate_ext = joints_.front().state().gate_ext;
  }
  ++tick_index_;
  if (!scenario_name_.empty() && ++scenario_pos_ >= scenario_inputs_.activations.size()) {
    scenario_name_.clear();
    scenario_inputs_ = {};
    scenario_pos_ = 0;
  }
  return tel;
}

std::vector<std::string> SessionCore::joint_names() const {
  std::vector<std::string> out;
  for (const auto& j : preset_.joints) out.push_back(j.name);
  return out;
}

SessionDescriptor SessionCore::descriptor(Role role) const {
  SessionDescriptor d;
  d.preset = preset_.name;
  d.joint_names = joint_names();
  d.presets = builtin_preset_names();
  d.scenarios = scenario::bundled_scenario_names();
  d.tick = kControlTick;
  d.role = role;
  return d;
}

}  // namespace lambdahand::server
