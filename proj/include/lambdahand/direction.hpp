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
#include <string_view>

namespace lambdahand {

enum class Direction { Flexion, Extension, NoMotion };

// Sign of the generalized torque produced by a direction: +1 flexion,
// -1 extension, 0 for no motion. Equation-of-motion convention (flexor
// torque positive).
constexpr int direction_sign(Direction d) noexcept {
  switch (d) {
    case Direction::Flexion:
      return 1;
    case Direction::Extension:
      return -1;
    case Direction::NoMotion:
      break;
  }
  return 0;
}

constexpr std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::Flexion:
      return "flexion";
    case Direction::Extension:
      return "extension";
    case Direction::NoMotion:
      break;
  }
  return "none";
}

std::optional<Direction> parse_direction(std::string_view text) noexcept;

// The dynamics core integrates in the torque convention of the equation of
// motion, where flexor torque is positive. Records, targets, telemetry and
// the proportional baseline report the anatomical angle, where extension is
// positive. The two differ only by sign.
// 0.0 - x rather than -x keeps a zero angle positive in exports.
constexpr double anatomical_from_model(double model_angle) noexcept { return 0.0 - model_angle; }
constexpr double model_from_anatomical(double anatomical_angle) noexcept {
  return 0.0 - anatomical_angle;
}

}  // namespace lambdahand
