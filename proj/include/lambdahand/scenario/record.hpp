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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lambdahand/direction.hpp"

namespace lambdahand::scenario {

// One control tick. Joint angles are anatomical (extension positive) and are
// the values at the start of the tick; alpha, gate, torques, theta0 and
// theta_eq are what the tick computed. target is NaN when the scenario has
// no reference angle.
struct RecordRow {
  double t = 0.0;
  double alpha_flex = 0.0;
  double alpha_ext = 0.0;
  Direction motion = Direction::NoMotion;
  int gate = 0;
  double tau_flex = 0.0;
  double tau_ext = 0.0;
  double theta0 = 0.0;
  double theta_eq = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;
  double theta_impedance = 0.0;
  double theta_proportional = 0.0;
  double motor_angle = 0.0;
  double target = 0.0;
};

struct ScenarioRecord {
  std::vector<RecordRow> rows;
};

// Column order of the CSV export.
const std::vector<std::string>& record_columns();

// Numbers use 9 significant digits; motion is "flexion", "extension" or "none".
void write_record_csv(std::ostream& out, const ScenarioRecord& record);
std::string record_csv(const ScenarioRecord& record);
void save_record_csv(const std::filesystem::path& path, const ScenarioRecord& record);

// Throws InputError on a wrong header or malformed row.
ScenarioRecord read_record_csv(std::istream& in);
ScenarioRecord load_record_csv(const std::filesystem::path& path);

}  // namespace lambdahand::scenario
