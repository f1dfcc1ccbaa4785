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

#include "lambdahand/activation.hpp"

#include <algorithm>
#include <cmath>

#include "lambdahand/errors.hpp"

namespace lambdahand {

double clamp_alpha(double alpha) {
  if (std::isnan(alpha)) {
    throw DomainError("contraction level is NaN");
  }
  return std::clamp(alpha, 0.0, kAlphaCap);
}

MuscleActivation MuscleActivation::make(double alpha_flex, double alpha_ext,
                                        Direction direction) {
  return {clamp_alpha(alpha_flex), clamp_alpha(alpha_ext), direction};
}

MuscleActivation classify_by_dominance(double alpha_flex, double alpha_ext) {
  if (alpha_flex > alpha_ext) {
    return MuscleActivation::make(alpha_flex, 0.0, Direction::Flexion);
  }
  if (alpha_ext > alpha_flex) {
    return MuscleActivation::make(0.0, alpha_ext, Direction::Extension);
  }
  return {};
}

}  // namespace lambdahand
