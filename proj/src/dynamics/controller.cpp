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

#include "lambdahand/controller.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "lambdahand/errors.hpp"

namespace lambdahand {

namespace {

int active_gate(Direction direction, const ControllerState& state) {
  switch (direction) {
    case Direction::Flexion:
      return state.gate_flex;
    case Direction::Extension:
      return state.gate_ext;
    case Direction::NoMotion:
      break;
  }
  return 0;
}

double switch_ratio(double alpha, double alpha_post) {
  if (!(alpha_post < 1.0)) {
    throw DomainError(fmt::format("alpha_post {} must stay below 1", alpha_post));
  }
  return (1.0 - alpha) / (1.0 - alpha_post);
}

}  // namespace

ControllerState update_threshold(const ControllerState& state,
                                 const MuscleActivation& activation) {
  ControllerState next = state;
  if (activation.direction != state.active_direction) {
    next.lambda_tilde_flex = 0.0;
    next.lambda_tilde_ext = 0.0;
    next.segment_peak_flex = 0.0;
    next.segment_peak_ext = 0.0;
    if (activation.direction == Direction::Flexion) {
      next.segment_peak_flex = activation.alpha_flex;
    } else if (activation.direction == Direction::Extension) {
      next.segment_peak_ext = activation.alpha_ext;
    }
    return next;
  }
  if (activation.direction == Direction::Flexion) {
    next.lambda_tilde_flex = state.segment_peak_flex;
    next.segment_peak_flex = std::max(state.segment_peak_flex, activation.alpha_flex);
  } else if (activation.direction == Direction::Extension) {
    next.lambda_tilde_ext = state.segment_peak_ext;
    next.segment_peak_ext = std::max(state.segment_peak_ext, activation.alpha_ext);
  }
  return next;
}

Gate evaluate_gate(double alpha, double lambda_tilde) noexcept {
  const int c_plus = (alpha - lambda_tilde > 0.0) ? 1 : 0;
  return {c_plus, 1 - c_plus};
}

ControllerState capture_switch(const ControllerState& state, Direction new_direction,
                               double current_equilibrium, double alpha_first) {
  if (new_direction == Direction::NoMotion) {
    throw DomainError("cannot switch into NoMotion");
  }
  if (new_direction == state.active_direction) {
    throw DomainError(
        fmt::format("direction {} is already active", to_string(new_direction)));
  }
  ControllerState next = state;
  next.theta_pre = current_equilibrium;
  next.alpha_post = clamp_alpha(alpha_first);
  next.active_direction = new_direction;
  return next;
}

TorqueCommand compute_torques(Direction direction, const MuscleActivation& activation,
                              const ControllerState& state, const ImpedanceParams& params) {
  if (direction == Direction::NoMotion || active_gate(direction, state) == 0) {
    return {};
  }
  const double alpha = activation.active_alpha();
  const double v = switch_ratio(alpha, state.alpha_post);
  if (direction == Direction::Flexion) {
    return {params.tau_max_flex * alpha, params.tau_max_flex * v * state.alpha_post};
  }
  return {params.tau_max_ext * v * state.alpha_post, params.tau_max_ext * alpha};
}

double compute_theta0(Direction direction, const ControllerState& state,
                      const MuscleActivation& activation, const ImpedanceParams& params) {
  if (active_gate(direction, state) == 0) {
    return state.prev_equilibrium;
  }
  const double alpha = activation.active_alpha();
  const double v = switch_ratio(alpha, state.alpha_post);
  return stiffness(params, state.alpha_post) / stiffness(params, alpha) * v * state.theta_pre;
}

StepResult step(const JointState& joint, const ControllerState& ctrl,
                const MuscleActivation& activation, const ImpedanceParams& params, double dt,
                const StepOptions& options) {
  if (!(dt > 0.0) || dt > kControlTick * (1.0 + 1e-9)) {
    throw DomainError(fmt::format("control tick {} s outside (0, {}]", dt, kControlTick));
  }
  const MuscleActivation act =
      MuscleActivation::make(activation.alpha_flex, activation.alpha_ext, activation.direction);
  const Direction direction = act.direction;
  const double alpha = act.active_alpha();

  ControllerState s = update_threshold(ctrl, act);
  if (direction == Direction::NoMotion) {
    s.active_direction = Direction::NoMotion;
  } else if (direction != s.active_direction) {
    s = capture_switch(s, direction, s.prev_equilibrium, alpha);
  }

  Gate gate;
  s.gate_flex = 0;
  s.gate_ext = 0;
  if (direction == Direction::Flexion) {
    gate = evaluate_gate(alpha, s.lambda_tilde_flex);
    s.gate_flex = gate.c_plus;
  } else if (direction == Direction::Extension) {
    gate = evaluate_gate(alpha, s.lambda_tilde_ext);
    s.gate_ext = gate.c_plus;
  }

  const TorqueCommand torque = compute_torques(direction, act, s, params);
  const double theta0 = compute_theta0(direction, s, act, params);
  const double theta_eq = equilibrium_angle(params, alpha, torque.tau_flex, torque.tau_ext, theta0);

  const HeldDynamics dyn{params.inertia, viscosity(params, alpha), stiffness(params, alpha),
                         theta0, torque.net()};
  StepResult result;
  result.joint = integrate_joint(joint, dyn, dt, options.max_substep);

  s.theta0_hold = theta0;
  s.prev_equilibrium = theta_eq;
  result.ctrl = s;
  result.out = {direction, alpha, gate, torque, theta0, theta_eq};
  return result;
}

JointController::JointController(ImpedanceParams params, StepOptions options)
    : params_(std::move(params)), options_(options) {
  params_.validate();
}

const TickOutput& JointController::tick(const MuscleActivation& activation, double dt) {
  StepResult r = step(joint_, ctrl_, activation, params_, dt, options_);
  joint_ = r.joint;
  ctrl_ = r.ctrl;
  last_ = r.out;
  return last_;
}

void JointController::reset() {
  joint_ = {};
  ctrl_ = {};
  last_ = {};
}

}  // namespace lambdahand
