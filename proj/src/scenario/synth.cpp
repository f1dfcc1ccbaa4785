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

#include "lambdahand/scenario/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "lambdahand/activation.hpp"
#include "lambdahand/controller.hpp"
#include "lambdahand/errors.hpp"

namespace lambdahand::scenario {

double ActivationPlan::level_at(double t) const noexcept {
  for (const auto& m : moves) {
    if (t >= m.start && t <= m.end) return m.level * smoothstep((t - m.start) / onset_s);
    if (t > m.end && t < m.end + release_s) {
      return m.level * (1.0 - smoothstep((t - m.end) / release_s));
    }
  }
  return 0.0;
}

Direction ActivationPlan::direction_at(double t) const noexcept {
  for (const auto& m : moves) {
    if (t >= m.start && t < m.end + release_s) return m.direction;
  }
  return Direction::NoMotion;
}

double predicted_equilibrium(Direction direction, double alpha, double alpha_post,
                             double theta_pre, const ImpedanceParams& params) {
  ControllerState s;
  s.active_direction = direction;
  s.alpha_post = alpha_post;
  s.theta_pre = model_from_anatomical(theta_pre);
  s.gate_flex = direction == Direction::Flexion ? 1 : 0;
  s.gate_ext = direction == Direction::Extension ? 1 : 0;
  const MuscleActivation act = direction == Direction::Flexion
                                   ? MuscleActivation{alpha, 0.0, direction}
                                   : MuscleActivation{0.0, alpha, direction};
  const TorqueCommand tau = compute_torques(direction, act, s, params);
  const double theta0 = compute_theta0(direction, s, act, params);
  return anatomical_from_model(
      equilibrium_angle(params, alpha, tau.tau_flex, tau.tau_ext, theta0));
}

ActivationPlan plan_activations(const TaskProfile& profile, const signal::CalibrationProfile& calib,
                                const ImpedanceParams& params) {
  ActivationPlan plan;
  plan.onset_s = profile.move_time;
  double held = 0.0;
  for (const auto& seg : profile.segments) {
    if (seg.kind != SegmentKind::Move) continue;
    const double a0 = clamp_alpha(calib.f_threshold / calib.class_for(seg.direction).f_max);
    const double sign = seg.to >= held ? 1.0 : -1.0;
    auto miss = [&](double a) {
      return sign * (predicted_equilibrium(seg.direction, a, a0, held, params) - seg.to);
    };
    SegmentPlan out{seg.direction, seg.start, seg.end, kAlphaCap, 0.0, true};
    if (miss(kAlphaCap) < 0.0) {
      out.reachable = false;
    } else {
      double lo = a0;
      double hi = kAlphaCap;
      for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (miss(mid) < 0.0 ? lo : hi) = mid;
      }
      out.level = hi;
    }
    out.predicted = predicted_equilibrium(seg.direction, out.level, a0, held, params);
    held = out.predicted;
    plan.moves.push_back(out);
  }
  return plan;
}

std::vector<signal::EmgFrame> synth_emg(const TaskProfile& profile,
                                        const signal::CalibrationProfile& calib,
                                        const ActivationPlan& plan, const SynthOptions& options) {
  if (!(options.sample_rate_hz > 0.0)) throw ConfigError("sample rate must be positive");
  if (!(options.noise_std >= 0.0)) throw ConfigError("noise level must be non-negative");
  calib.validate();
  const std::size_t channels = calib.channel_count();
  const double scale = static_cast<double>(channels);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, options.noise_std > 0.0 ? options.noise_std : 1.0);

  const auto n = static_cast<std::size_t>(std::llround(profile.duration() * options.sample_rate_hz));
  std::vector<signal::EmgFrame> frames;
  frames.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / options.sample_rate_hz;
    signal::EmgFrame f{t, calib.rest_level};
    const Direction dir = plan.direction_at(t);
    const double a = plan.level_at(t);
    if (dir != Direction::NoMotion && a > 0.0) {
      const signal::MotionClass& m = calib.class_for(dir);
      for (std::size_t c = 0; c < channels; ++c) {
        const double normalized = a * scale * m.f_max * m.pattern_template[c];
        f.channels[c] += normalized * (calib.mvc_level[c] - calib.rest_level[c]);
      }
    }
    if (options.noise_std > 0.0) {
      for (auto& v : f.channels) v = std::max(0.0, v + noise(rng));
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

std::vector<signal::EmgFrame> synth_calibration_recording(
    const signal::CalibrationProfile& calib, const signal::CalibrationProtocol& protocol,
    const SynthOptions& options) {
  calib.validate();
  const std::size_t channels = calib.channel_count();
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, options.noise_std > 0.0 ? options.noise_std : 1.0);
  const auto n =
      static_cast<std::size_t>(std::llround(protocol.duration() * options.sample_rate_hz));
  std::vector<signal::EmgFrame> frames;
  frames.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / options.sample_rate_hz;
    signal::EmgFrame f{t, calib.rest_level};
    if (t >= protocol.rest_s) {
      const auto phase = static_cast<std::size_t>((t - protocol.rest_s) / protocol.mvc_s);
      if (phase < protocol.motions.size()) {
        const signal::MotionClass& m = calib.class_for(protocol.motions[phase].second);
        for (std::size_t c = 0; c < channels; ++c) {
          const double normalized =
              static_cast<double>(channels) * m.f_max * m.pattern_template[c];
          f.channels[c] += normalized * (calib.mvc_level[c] - calib.rest_level[c]);
        }
      }
    }
    if (options.noise_std > 0.0) {
      for (auto& v : f.channels) v = std::max(0.0, v + noise(rng));
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace lambdahand::scenario
