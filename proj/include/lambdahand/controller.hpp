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

#include "lambdahand/activation.hpp"
#include "lambdahand/direction.hpp"
#include "lambdahand/impedance.hpp"
#include "lambdahand/integrator.hpp"

namespace lambdahand {

// Muscle activity gate. c_plus = 1 while the contraction level exceeds its
// threshold; c_minus is always the complement.
struct Gate {
  int c_plus = 0;
  int c_minus = 1;

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct TorqueCommand {
  double tau_flex = 0.0;  // N m
  double tau_ext = 0.0;   // N m

  double net() const noexcept { return tau_flex - tau_ext; }

  friend bool operator==(const TorqueCommand&, const TorqueCommand&) = default;
};

// Everything the control law carries between ticks. Initial values are the
// rest state: origin equilibrium, zero thresholds, no motion.
struct ControllerState {
  // Thresholds used at the current tick: the running maximum of the
  // direction's contraction level over the earlier ticks of the segment.
  double lambda_tilde_flex = 0.0;
  double lambda_tilde_ext = 0.0;
  // Running maximum including the current tick; becomes lambda_tilde next tick.
  double segment_peak_flex = 0.0;
  double segment_peak_ext = 0.0;

  int gate_flex = 0;
  int gate_ext = 0;

  double theta0_hold = 0.0;       // stiffness origin applied at the last tick
  double theta_pre = 0.0;         // equilibrium just before the last switch
  double alpha_post = 0.0;        // contraction level right after the last switch
  double prev_equilibrium = 0.0;  // theta_eq of the last tick
  Direction active_direction = Direction::NoMotion;

  friend bool operator==(const ControllerState&, const ControllerState&) = default;
};

// Refreshes the thresholds for this tick. A change of classified direction
// (including to or from NoMotion) starts a new segment with zero thresholds.
ControllerState update_threshold(const ControllerState& state,
                                 const MuscleActivation& activation);

// c_plus = 1 iff alpha - lambda_tilde > 0.
Gate evaluate_gate(double alpha, double lambda_tilde) noexcept;

// Latches the switch pair at the first tick of a new direction:
// theta_pre = current_equilibrium, alpha_post = clamp(alpha_first).
// Throws DomainError when new_direction is NoMotion or already active.
ControllerState capture_switch(const ControllerState& state, Direction new_direction,
                               double current_equilibrium, double alpha_first);

// Muscle torques for the classified direction i (delta_f = 1, delta_e = -1):
//   tau_f - tau_e = C+ * delta_i * tau_i^max * (a_i - V_i * a_post),
//   V_i = (1 - a_i) / (1 - a_post).
// The classified muscle supplies tau_i^max * a_i; the complementary muscle
// supplies tau_i^max * V_i * a_post. Zero for NoMotion or a closed gate.
TorqueCommand compute_torques(Direction direction, const MuscleActivation& activation,
                              const ControllerState& state, const ImpedanceParams& params);

// Stiffness origin:
//   theta0 = C+ * K(a_post) / K(a_i) * V_i * theta_pre + C- * theta_eq(t - dt)
double compute_theta0(Direction direction, const ControllerState& state,
                      const MuscleActivation& activation, const ImpedanceParams& params);

struct TickOutput {
  Direction direction = Direction::NoMotion;
  double alpha = 0.0;  // contraction level of the classified direction
  Gate gate;           // gate of the classified direction
  TorqueCommand torque;
  double theta0 = 0.0;
  double theta_eq = 0.0;

  friend bool operator==(const TickOutput&, const TickOutput&) = default;
};

struct StepResult {
  JointState joint;
  ControllerState ctrl;
  TickOutput out;
};

struct StepOptions {
  double max_substep = kDefaultSubstep;
};

// One control tick: threshold update, switch capture, gates, torques,
// stiffness origin and equilibrium, then integration of the equation of
// motion over dt with all coefficients held. Requires 0 < dt <= kControlTick.
StepResult step(const JointState& joint, const ControllerState& ctrl,
                const MuscleActivation& activation, const ImpedanceParams& params, double dt,
                const StepOptions& options = {});

// Owns the state of one joint and advances it tick by tick.
class JointController {
 public:
  explicit JointController(ImpedanceParams params, StepOptions options = {});

  const TickOutput& tick(const MuscleActivation& activation, double dt = kControlTick);
  void reset();

  const ImpedanceParams& params() const noexcept { return params_; }
  const JointState& joint() const noexcept { return joint_; }
  const ControllerState& state() const noexcept { return ctrl_; }
  const TickOutput& last_output() const noexcept { return last_; }

 private:
  ImpedanceParams params_;
  StepOptions options_;
  JointState joint_;
  ControllerState ctrl_;
  TickOutput last_;
};

}  // namespace lambdahand
