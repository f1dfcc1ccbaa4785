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
#include <numbers>

#include <json.hpp>

namespace lambdahand::scenario {

// PI position servo driving a first-order motor lag. The derivative term is
// not supported: kd must stay 0.
struct ServoConfig {
  double kp = 8.0;
  double ki = 20.0;  // 1/s
  double kd = 0.0;
  double period = 0.005;          // s
  double time_constant = 0.05;    // s
  double min_angle = -std::numbers::pi / 2.0;
  double max_angle = 7.0 * std::numbers::pi / 18.0;

  // Throws ConfigError.
  void validate() const;

  friend bool operator==(const ServoConfig&, const ServoConfig&) = default;
};

struct PlantState {
  double angle = 0.0;     // rad
  double integral = 0.0;  // integrated error, rad s
  double p_term = 0.0;    // last proportional effort
  double command = 0.0;   // last plant input (rad)

  friend bool operator==(const PlantState&, const PlantState&) = default;
};

// One control period: u = kp e + ki * integral(e), clamped to the angle range.
// The integral only accumulates while the command is unsaturated or the error
// drives it back inside. The plant follows u with an exact first-order lag and
// stays within the angle limits.
PlantState pid_plant_step(const ServoConfig& servo, double target, const PlantState& state);

nlohmann::json to_json(const ServoConfig& servo);
// Missing keys keep their defaults. Throws ConfigError.
ServoConfig servo_config_from_json(const nlohmann::json& doc);
ServoConfig load_servo_config(const std::filesystem::path& path);

// Time until |angle - target| stays within band * |target - start| for a step
// from rest at `start`, simulated up to `horizon` seconds. Negative if never.
double settling_time(const ServoConfig& servo, double start, double target, double band = 0.02,
                     double horizon = 10.0);

}  // namespace lambdahand::scenario
