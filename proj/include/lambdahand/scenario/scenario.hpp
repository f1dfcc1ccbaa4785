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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lambdahand/activation.hpp"
#include "lambdahand/baselines/baselines.hpp"
#include "lambdahand/controller.hpp"
#include "lambdahand/scenario/inputs.hpp"
#include "lambdahand/scenario/record.hpp"
#include "lambdahand/scenario/servo.hpp"

namespace lambdahand::scenario {

enum class SourceKind { Input1, Input2, Task, Trace };

struct Scenario {
  std::string name;
  SourceKind source = SourceKind::Input1;
  int task = 0;                                    // Task source
  std::filesystem::path trace;                     // Trace source
  std::optional<std::filesystem::path> calibration;  // default profile when unset
  double duration = kInputDuration;                // s; Task sources use the profile length
  double tick = kControlTick;                      // s
  std::string preset = "wrist";                    // built-in name or parameter file
  std::size_t joint = 0;                           // joint of the preset to drive
  std::vector<Window> relaxation_windows;
  std::vector<Window> active_windows;
  double noise_std = 0.0;  // synthetic EMG noise, signal units
  std::uint64_t seed = 0;
  double max_substep = kDefaultSubstep;
  ServoConfig servo;
  baselines::ProportionalConfig proportional;

  // Throws ConfigError.
  void validate() const;
};

std::vector<std::string> bundled_scenario_names();
// Throws InputError for unknown names.
Scenario bundled_scenario(const std::string& name);

// Per-tick controller inputs and reference angles (NaN without a reference).
struct ScenarioInputs {
  std::vector<MuscleActivation> activations;
  std::vector<double> targets;
};

// Number of rows: round(duration / tick) + 1.
std::size_t tick_count(const Scenario& scenario);

// Artificial inputs are classified by dominance. EMG sources go through the
// signal pipeline; each tick uses the newest frame at or before it.
ScenarioInputs prepare_inputs(const Scenario& scenario);

ImpedanceParams scenario_params(const Scenario& scenario);

// The proposed controller together with both baselines and the servo, fed
// with the same activation each tick.
class ScenarioRunner {
 public:
  ScenarioRunner(ImpedanceParams params, ServoConfig servo,
                 baselines::ProportionalConfig proportional, double tick = kControlTick,
                 StepOptions options = {});

  RecordRow step(double t, const MuscleActivation& activation, double target);
  void reset();

  const JointController& controller() const noexcept { return controller_; }

 private:
  ImpedanceParams params_;
  ServoConfig servo_;
  double tick_;
  StepOptions options_;
  JointController controller_;
  JointState baseline_;
  baselines::ProportionalController proportional_;
  PlantState plant_;
};

ScenarioRecord run_scenario(const Scenario& scenario);
// Same, with inputs prepared elsewhere.
ScenarioRecord run_scenario(const Scenario& scenario, const ScenarioInputs& inputs);

struct SectionRmse {
  std::optional<double> relaxation;
  std::optional<double> active;
  std::optional<double> overall;
};

struct RmseTable {
  SectionRmse proposed;
  SectionRmse impedance;
  SectionRmse proportional;
  SectionRmse motor;
};

// Against the target column; nullopt when the record has no target.
std::optional<RmseTable> rmse_table(const Scenario& scenario, const ScenarioRecord& record);

nlohmann::json summary_json(const Scenario& scenario, const ScenarioRecord& record);

}  // namespace lambdahand::scenario
