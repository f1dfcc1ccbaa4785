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

#include <cstdint>
#include <vector>

#include "lambdahand/impedance.hpp"
#include "lambdahand/scenario/inputs.hpp"
#include "lambdahand/signal/calibration.hpp"

namespace lambdahand::scenario {

// Contraction level held through one Move segment.
struct SegmentPlan {
  Direction direction = Direction::Flexion;
  double start = 0.0;
  double end = 0.0;
  double level = 0.0;      // peak contraction level
  double predicted = 0.0;  // equilibrium the level produces, anatomical rad
  bool reachable = true;   // false when even kAlphaCap falls short of the target
};

struct ActivationPlan {
  std::vector<SegmentPlan> moves;
  double onset_s = 1.0;    // smoothstep rise at the start of each move
  double release_s = 0.2;  // smoothstep fall after each move ends

  // Contraction level and direction scheduled at t.
  double level_at(double t) const noexcept;
  Direction direction_at(double t) const noexcept;
};

// Equilibrium the controller reaches from a held angle theta_pre (anatomical)
// when the classified muscle rises from alpha_post to alpha.
double predicted_equilibrium(Direction direction, double alpha, double alpha_post,
                             double theta_pre, const ImpedanceParams& params);

// Per Move segment, the contraction level whose predicted equilibrium hits the
// segment's target. The switch level is taken as the first value the pipeline
// can report, f_threshold / f_max.
ActivationPlan plan_activations(const TaskProfile& profile, const signal::CalibrationProfile& calib,
                                const ImpedanceParams& params);

struct SynthOptions {
  double sample_rate_hz = 500.0;
  double noise_std = 0.0;  // additive Gaussian noise, signal units
  std::uint64_t seed = 0;
};

// Two-channel envelopes at sample_rate_hz over [0, duration]. A contraction at
// level a of class m produces the normalized signal a * L * f_max * template_m,
// mapped back through the calibration's rest and MVC levels. Noisy samples are
// clipped at zero.
std::vector<signal::EmgFrame> synth_emg(const TaskProfile& profile,
                                        const signal::CalibrationProfile& calib,
                                        const ActivationPlan& plan, const SynthOptions& options = {});

// Recording that follows `protocol` for a subject whose signals match
// `calib`: rest level, then each motion at full contraction.
std::vector<signal::EmgFrame> synth_calibration_recording(
    const signal::CalibrationProfile& calib, const signal::CalibrationProtocol& protocol,
    const SynthOptions& options = {});

}  // namespace lambdahand::scenario
