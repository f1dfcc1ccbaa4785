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

#include "lambdahand/scenario/servo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "lambdahand/errors.hpp"

namespace lambdahand::scenario {

void ServoConfig::validate() const {
  if (kd != 0.0) throw ConfigError("servo derivative gain must be 0");
  if (!std::isfinite(kp) || !std::isfinite(ki) || kp < 0.0 || ki < 0.0) {
    throw ConfigError("servo gains must be finite and non-negative");
  }
  if (std::abs(period - 0.005) > 1e-12) {
    throw ConfigError(fmt::format("servo period must be 0.005 s, got {}", period));
  }
  if (!(time_constant > 0.0)) throw ConfigError("motor time constant must be positive");
  if (!(min_angle < max_angle)) throw ConfigError("servo angle limits must be ordered");
}

PlantState pid_plant_step(const ServoConfig& servo, double target, const PlantState& state) {
  PlantState next = state;
  const double e = target - state.angle;
  next.p_term = servo.kp * e;
  const double trial_integral = state.integral + e * servo.period;
  const double trial = next.p_term + servo.ki * trial_integral;
  const bool high = trial > servo.max_angle && e > 0.0;
  const bool low = trial < servo.min_angle && e < 0.0;
  if (!high && !low) next.integral = trial_integral;
  next.command = std::clamp(next.p_term + servo.ki * next.integral, servo.min_angle,
                            servo.max_angle);
  const double blend = 1.0 - std::exp(-servo.period / servo.time_constant);
  next.angle = std::clamp(state.angle + (next.command - state.angle) * blend, servo.min_angle,
                          servo.max_angle);
  return next;
}

nlohmann::json to_json(const ServoConfig& servo) {
  return {{"kp", servo.kp},
          {"ki", servo.ki},
          {"kd", servo.kd},
          {"period", servo.period},
          {"time_constant", servo.time_constant},
          {"min_angle", servo.min_angle},
          {"max_angle", servo.max_angle}};
}

ServoConfig servo_config_from_json(const nlohmann::json& doc) {
  ServoConfig s;
  try {
    s.kp = doc.value("kp", s.kp);
    s.ki = doc.value("ki", s.ki);
    s.kd = doc.value("kd", s.kd);
    s.period = doc.value("period", s.period);
    s.time_constant = doc.value("time_constant", s.time_constant);
    s.min_angle = doc.value("min_angle", s.min_angle);
    s.max_angle = doc.value("max_angle", s.max_angle);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("servo config: {}", e.what()));
  }
  s.validate();
  return s;
}

ServoConfig load_servo_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open servo config {}", path.string()));
  try {
    return servo_config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

double settling_time(const ServoConfig& servo, double start, double target, double band,
                     double horizon) {
  servo.validate();
  const double tol = band * std::abs(target - start);
  PlantState s;
  s.angle = start;
  const auto n = static_cast<long>(std::llround(horizon / servo.period));
  double last_outside = 0.0;
  for (long i = 1; i <= n; ++i) {
    s = pid_plant_step(servo, target, s);
    if (std::abs(s.angle - target) > tol) last_outside = static_cast<double>(i) * servo.period;
  }
  if (std::abs(s.angle - target) > tol) return -1.0;
  return last_outside + servo.period;
}

}  // namespace lambdahand::scenario
