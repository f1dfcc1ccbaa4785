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

#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "lambdahand/activation.hpp"
#include "lambdahand/impedance.hpp"
#include "lambdahand/integrator.hpp"

namespace lambdahand::baselines {

// Conventional impedance control: the stiffness origin stays at the initial
// position and both muscles drive torque directly, tau_i = tau_i^max * a_i.
// Stiffness and viscosity follow the larger of the two levels, which is the
// classified level whenever the other muscle is silent.
// Angles are in the torque frame (flexion positive), like dynamics-core.
JointState impedance_baseline_step(const JointState& joint, const MuscleActivation& activation,
                                   const ImpedanceParams& params, double dt,
                                   double max_substep = kDefaultSubstep);

// Position-mode proportional control in the anatomical frame (extension
// positive): angle = clamp(delta_i * gain_i * a_i, min_angle, max_angle).
struct ProportionalConfig {
  double gain_flex = (std::numbers::pi / 2.0) / 0.3;       // rad per unit a
  double gain_ext = (7.0 * std::numbers::pi / 18.0) / 0.3;  // rad per unit a
  double min_angle = -std::numbers::pi / 2.0;
  double max_angle = 7.0 * std::numbers::pi / 18.0;
  std::optional<double> rate_limit;  // rad/s

  // Throws InvalidParameter.
  void validate() const;
};

// Memoryless map, no rate limit.
double proportional_step(const MuscleActivation& activation, const ProportionalConfig& config);

// Adds the optional rate limit on top of proportional_step.
class ProportionalController {
 public:
  explicit ProportionalController(ProportionalConfig config = {});

  double tick(const MuscleActivation& activation, double dt = kControlTick);
  void reset() noexcept { angle_ = 0.0; }
  double angle() const noexcept { return angle_; }
  const ProportionalConfig& config() const noexcept { return config_; }

 private:
  ProportionalConfig config_;
  double angle_ = 0.0;
};

// sqrt(mean((a - b)^2)). Throws InputError on empty or mismatched series.
double rmse(std::span<const double> a, std::span<const double> b);

// Same over the samples where mask is true. Throws InputError if the mask
// length differs or selects nothing.
double rmse(std::span<const double> a, std::span<const double> b, const std::vector<bool>& mask);

}  // namespace lambdahand::baselines
