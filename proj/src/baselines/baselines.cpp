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

#include "lambdahand/baselines/baselines.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "lambdahand/errors.hpp"

namespace lambdahand::baselines {

JointState impedance_baseline_step(const JointState& joint, const MuscleActivation& activation,
                                   const ImpedanceParams& params, double dt,
                                   double max_substep) {
  const double af = clamp_alpha(activation.alpha_flex);
  const double ae = clamp_alpha(activation.alpha_ext);
  const double level = std::max(af, ae);
  HeldDynamics dyn;
  dyn.inertia = params.inertia;
  dyn.viscosity = viscosity(params, level);
  dyn.stiffness = stiffness(params, level);
  dyn.theta0 = 0.0;
  dyn.net_torque = params.tau_max_flex * af - params.tau_max_ext * ae;
  return integrate_joint(joint, dyn, dt, max_substep);
}

void ProportionalConfig::validate() const {
  if (!std::isfinite(gain_flex) || !std::isfinite(gain_ext) || gain_flex < 0.0 ||
      gain_ext < 0.0) {
    throw InvalidParameter("proportional gains must be finite and non-negative");
  }
  if (!(min_angle < max_angle) || min_angle > 0.0 || max_angle < 0.0) {
    throw InvalidParameter(
        fmt::format("proportional range [{}, {}] must be ordered and contain 0", min_angle,
                    max_angle));
  }
  if (rate_limit && !(*rate_limit > 0.0)) {
    throw InvalidParameter("proportional rate limit must be positive");
  }
}

double proportional_step(const MuscleActivation& activation, const ProportionalConfig& config) {
  double raw = 0.0;
  switch (activation.direction) {
    case Direction::Flexion:
      raw = -config.gain_flex * clamp_alpha(activation.alpha_flex);
      break;
    case Direction::Extension:
      raw = config.gain_ext * clamp_alpha(activation.alpha_ext);
      break;
    case Direction::NoMotion:
      break;
  }
  return std::clamp(raw, config.min_angle, config.max_angle);
}

ProportionalController::ProportionalController(ProportionalConfig config)
    : config_(std::move(config)) {
  config_.validate();
}

double ProportionalController::tick(const MuscleActivation& activation, double dt) {
  if (!(dt > 0.0)) throw DomainError("proportional tick needs dt > 0");
  const double target = proportional_step(activation, config_);
  if (!config_.rate_limit) {
    angle_ = target;
  } else {
    const double max_move = *config_.rate_limit * dt;
    angle_ += std::clamp(target - angle_, -max_move, max_move);
  }
  return angle_;
}

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError(fmt::format("rmse of series with {} and {} samples", a.size(), b.size()));
  }
  if (a.empty()) throw InputError("rmse of empty series");
}

}  // namespace

double rmse(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc / static_cast<double>(a.size()));
}

double rmse(std::span<const double> a, std::span<const double> b, const std::vector<bool>& mask) {
  check_lengths(a, b);
  if (mask.size() != a.size()) {
    throw InputError(fmt::format("mask has {} entries for {} samples", mask.size(), a.size()));
  }
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!mask[i]) continue;
    acc += (a[i] - b[i]) * (a[i] - b[i]);
    ++n;
  }
  if (n == 0) throw InputError("rmse mask selects no samples");
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace lambdahand::baselines
