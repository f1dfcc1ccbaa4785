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

#include <optional>
#include <string>
#include <vector>

#include "lambdahand/controller.hpp"
#include "lambdahand/params_io.hpp"
#include "lambdahand/scenario/scenario.hpp"
#include "lambdahand/server/protocol.hpp"

namespace lambdahand::server {

// Deterministic tick logic of a live session, independent of sockets and
// clocks. Every joint of the preset receives the same activation.
class SessionCore {
 public:
  explicit SessionCore(const std::string& preset = "wrist");

  // Commands take effect at the next tick(). Activation and motion commands
  // only set state, so several of them between two ticks coalesce to the
  // last one.
  void apply(const Command& cmd);

  // Advances one control tick; nullopt while paused.
  std::optional<Telemetry> tick();

  // Activation the next tick will use.
  MuscleActivation pending_activation() const;

  bool paused() const noexcept { return paused_; }
  const std::string& scenario() const noexcept { return scenario_name_; }
  const ParamSet& preset() const noexcept { return preset_; }
  std::vector<std::string> joint_names() const;
  std::uint64_t tick_index() const noexcept { return tick_index_; }
  const std::vector<JointController>& joints() const noexcept { return joints_; }

  SessionDescriptor descriptor(Role role) const;

 private:
  void load(const std::string& preset);
  void reset_state();

  ParamSet preset_;
  std::vector<JointController> joints_;
  double alpha_flex_ = 0.0;
  double alpha_ext_ = 0.0;
  std::optional<Direction> motion_override_;
  std::int64_t last_sequence_ = -1;
  bool paused_ = false;
  std::uint64_t tick_index_ = 0;

  std::string scenario_name_;
  scenario::ScenarioInputs scenario_inputs_;
  std::size_t scenario_pos_ = 0;
};

}  // namespace lambdahand::server
