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
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lambdahand/direction.hpp"

namespace lambdahand::signal {

struct EmgFrame {
  double timestamp = 0.0;         // s
  std::vector<double> channels;   // rectified envelope, signal units

  friend bool operator==(const EmgFrame&, const EmgFrame&) = default;
};

// One classifiable motion: its direction, the force information measured at
// maximum voluntary contraction, and the mean EMG pattern at MVC.
struct MotionClass {
  std::string label;
  Direction direction = Direction::Flexion;
  double f_max = 1.0;
  std::vector<double> pattern_template;

  friend bool operator==(const MotionClass&, const MotionClass&) = default;
};

struct CalibrationProfile {
  std::vector<double> rest_level;
  std::vector<double> mvc_level;
  std::vector<MotionClass> classes;
  double f_threshold = 0.02;
  double cutoff_hz = 8.0;
  double sample_rate_hz = 500.0;

  std::size_t channel_count() const noexcept { return rest_level.size(); }

  // Throws ConfigError when an invariant is violated.
  void validate() const;

  // First class mapped to the direction. Throws ConfigError if none.
  const MotionClass& class_for(Direction direction) const;

  friend bool operator==(const CalibrationProfile&, const CalibrationProfile&) = default;
};

// Two-channel (flexor, extensor) reference profile with 5 % crosstalk.
CalibrationProfile default_calibration();

nlohmann::json to_json(const CalibrationProfile& calib);
CalibrationProfile calibration_from_json(const nlohmann::json& doc);
CalibrationProfile load_calibration(const std::filesystem::path& path);
void save_calibration(const CalibrationProfile& calib, const std::filesystem::path& path);

// Scripted recording protocol: rest, then one MVC hold per motion, back to back.
struct CalibrationProtocol {
  double rest_s = 5.0;
  double mvc_s = 5.0;
  double settle_s = 1.0;  // skipped at the start of each phase
  std::vector<std::pair<std::string, Direction>> motions{{"flexion", Direction::Flexion},
                                                         {"extension", Direction::Extension}};

  double duration() const noexcept {
    return rest_s + mvc_s * static_cast<double>(motions.size());
  }
};

// Derives rest/MVC levels, per-motion f_max and templates from a recording
// taken under `protocol`. Signals go through the same low-pass filter the
// pipeline uses. Throws InputError when a phase has no samples.
CalibrationProfile calibrate(const std::vector<EmgFrame>& recording,
                             const CalibrationProtocol& protocol, double sample_rate_hz = 500.0,
                             double cutoff_hz = 8.0, double f_threshold = 0.02);

}  // namespace lambdahand::signal
