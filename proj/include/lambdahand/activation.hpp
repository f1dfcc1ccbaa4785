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

#include "lambdahand/direction.hpp"

namespace lambdahand {

// Upper bound applied to every contraction level entering the controller.
// Keeps V(t) = (1 - a) / (1 - a_post) finite.
inline constexpr double kAlphaCap = 0.999;

// Clamps to [0, kAlphaCap]. Throws DomainError for NaN.
double clamp_alpha(double alpha);

struct MuscleActivation {
  double alpha_flex = 0.0;
  double alpha_ext = 0.0;
  Direction direction = Direction::NoMotion;

  // Builds an activation with both levels clamped to [0, kAlphaCap].
  static MuscleActivation make(double alpha_flex, double alpha_ext, Direction direction);

  // Contraction level of the classified direction; 0 for NoMotion.
  double active_alpha() const noexcept {
    switch (direction) {
      case Direction::Flexion:
        return alpha_flex;
      case Direction::Extension:
        return alpha_ext;
      case Direction::NoMotion:
        break;
    }
    return 0.0;
  }

  friend bool operator==(const MuscleActivation&, const MuscleActivation&) = default;
};

// The dominant muscle decides the class: flexion when alpha_flex > alpha_ext,
// extension when alpha_ext > alpha_flex, no motion on a tie. Only the
// classified muscle's level is kept.
MuscleActivation classify_by_dominance(double alpha_flex, double alpha_ext);

}  // namespace lambdahand
