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

#include "lambdahand/scenario/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "lambdahand/errors.hpp"
#include "lambdahand/params_io.hpp"
#include "lambdahand/scenario/synth.hpp"
#include "lambdahand/signal/pipeline.hpp"

namespace lambdahand::scenario {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double source_duration(const Scenario& s) {
  if (s.source == SourceKind::Task) return gen_task_profile(s.task).duration();
  return s.duration;
}

signal::CalibrationProfile scenario_calibration(const Scenario& s) {
  return s.calibration ? signal::load_calibration(*s.calibration) : signal::default_calibration();
}

// Runs the frames through the pipeline and samples the newest output at or
// before each tick.
std::vector<MuscleActivation> bridge(const std::vector<signal::EmgFrame>& frames,
                                     const signal::CalibrationProfile& calib, std::size_t ticks,
                                     double tick) {
  std::vector<MuscleActivation> out(ticks);
  if (frames.empty()) return out;
  signal::EmgPipeline pipe(calib);
  const double t0 = frames.front().timestamp;
  std::size_t next = 0;
  signal::ProcessedFrame latest;
  bool have = false;
  for (std::size_t i = 0; i < ticks; ++i) {
    const double t = static_cast<double>(i) * tick;
    while (next < frames.size() && frames[next].timestamp - t0 <= t + 1e-9) {
      latest = pipe.process(frames[next++]);
      have = true;
    }
    if (have) out[i] = latest.activation();
  }
  return out;
}

}  // namespace

void Scenario::validate() const {
  if (!(tick > 0.0) || tick > kControlTick * (1.0 + 1e-9)) {
    throw ConfigError(fmt::format("scenario tick must be in (0, {}] s, got {}", kControlTick, tick));
  }
  const double d = source_duration(*this);
  if (!(d >= 0.0)) throw ConfigError("scenario duration must be non-negative");
  if ((source == SourceKind::Input1 || source == SourceKind::Input2) && d > kInputDuration) {
    throw ConfigError(fmt::format("artificial inputs end at {} s", kInputDuration));
  }
  for (const auto* list : {&relaxation_windows, &active_windows}) {
    for (const auto& w : *list) {
      if (!(w.start <= w.end) || w.start < 0.0 || w.end > d + 1e-9) {
        throw ConfigError(fmt::format("window [{}, {}] outside [0, {}]", w.start, w.end, d));
      }
    }
  }
  if (!(noise_std >= 0.0)) throw ConfigError("noise level must be non-negative");
  if (!(max_substep > 0.0)) throw ConfigError("integration substep must be positive");
  if (source == SourceKind::Trace && trace.empty()) throw ConfigError("trace scenario needs a file");
  servo.validate();
  try {
    proportional.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
}

std::vector<std::string> bundled_scenario_names() {
  return {"input1", "input1_finger", "input2", "task1", "task1_noisy", "task2", "task2_noisy"};
}

Scenario bundled_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  if (name == "input1" || name == "input1_finger") {
    s.source = SourceKind::Input1;
    s.relaxation_windows = input1_relaxation_windows();
    if (name == "input1_finger") s.preset = "finger";
    return s;
  }
  if (name == "input2") {
    s.source = SourceKind::Input2;
    s.relaxation_windows = input2_relaxation_windows();
    return s;
  }
  for (int task : {1, 2}) {
    const std::string base = fmt::format("task{}", task);
    if (name != base && name != base + "_noisy") continue;
    const TaskProfile profile = gen_task_profile(task);
    s.source = SourceKind::Task;
    s.task = task;
    s.duration = profile.duration();
    s.relaxation_windows = profile.relaxation_windows();
    s.active_windows = profile.active_windows();
    if (name != base) {
      s.noise_std = 0.005;
      s.seed = 2026 + static_cast<std::uint64_t>(task);
    }
    return s;
  }
  throw InputError(fmt::format("unknown scenario '{}'", name));
}

std::size_t tick_count(const Scenario& scenario) {
  return static_cast<std::size_t>(std::llround(source_duration(scenario) / scenario.tick)) + 1;
}

ImpedanceParams scenario_params(const Scenario& scenario) {
  const ParamSet set = resolve_preset(scenario.preset);
  if (scenario.joint >= set.joints.size()) {
    throw ConfigError(fmt::format("preset '{}' has {} joints, joint {} requested", set.name,
                                  set.joints.size(), scenario.joint));
  }
  return set.joints[scenario.joint];
}

ScenarioInputs prepare_inputs(const Scenario& scenario) {
  scenario.validate();
  const std::size_t n = tick_count(scenario);
  const double duration = source_duration(scenario);
  ScenarioInputs in;
  in.targets.assign(n, kNaN);
  switch (scenario.source) {
    case SourceKind::Input1:
    case SourceKind::Input2: {
      in.activations.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = std::min(static_cast<double>(i) * scenario.tick, duration);
        const auto [af, ae] =
            scenario.source == SourceKind::Input1 ? gen_input1(t) : gen_input2(t);
        in.activations[i] = classify_by_dominance(af, ae);
      }
      break;
    }
    case SourceKind::Task: {
      const TaskProfile profile = gen_task_profile(scenario.task);
      const signal::CalibrationProfile calib = scenario_calibration(scenario);
      const ActivationPlan plan = plan_activations(profile, calib, scenario_params(scenario));
      SynthOptions opts;
      opts.sample_rate_hz = calib.sample_rate_hz;
      opts.noise_std = scenario.noise_std;
      opts.seed = scenario.seed;
      in.activations = bridge(synth_emg(profile, calib, plan, opts), calib, n, scenario.tick);
      for (std::size_t i = 0; i < n; ++i) {
        in.targets[i] = profile.target(static_cast<double>(i) * scenario.tick);
      }
      break;
    }
    case SourceKind::Trace: {
      const signal::CalibrationProfile calib = scenario_calibration(scenario);
      in.activations = bridge(signal::read_emg_csv(scenario.trace), calib, n, scenario.tick);
      break;
    }
  }
  return in;
}

ScenarioRunner::ScenarioRunner(ImpedanceParams params, ServoConfig servo,
                               baselines::ProportionalConfig proportional, double tick,
                               StepOptions options)
    : params_(std::move(params)),
      servo_(servo),
      tick_(tick),
      options_(options),
      controller_(params_, options_),
      proportional_(std::move(proportional)) {
  servo_.validate();
}

RecordRow ScenarioRunner::step(double t, const MuscleActivation& activation, double target) {
  const MuscleActivation act =
      MuscleActivation::make(activation.alpha_flex, activation.alpha_ext, activation.direction);
  RecordRow r;
  r.t = t;
  r.alpha_flex = act.alpha_flex;
  r.alpha_ext = act.alpha_ext;
  r.target = target;
  r.theta = anatomical_from_model(controller_.joint().theta);
  r.theta_dot = anatomical_from_model(controller_.joint().theta_dot);
  r.theta_impedance = anatomical_from_model(baseline_.theta);
  r.motor_angle = plant_.angle;

  const TickOutput& out = controller_.tick(act, tick_);
  r.motion = out.direction;
  r.gate = out.gate.c_plus;
  r.tau_flex = out.torque.tau_flex;
  r.tau_ext = out.torque.tau_ext;
  r.theta0 = anatomical_from_model(out.theta0);
  r.theta_eq = anatomical_from_model(out.theta_eq);

  baseline_ = baselines::impedance_baseline_step(baseline_, act, params_, tick_,
                                                 options_.max_substep);
  r.theta_proportional = proportional_.tick(act, tick_);
  plant_ = pid_plant_step(servo_, r.theta, plant_);
  return r;
}

void ScenarioRunner::reset() {
  controller_.reset();
  baseline_ = {};
  proportional_.reset();
  plant_ = {};
}

ScenarioRecord run_scenario(const Scenario& scenario) {
  return run_scenario(scenario, prepare_inputs(scenario));
}

ScenarioRecord run_scenario(const Scenario& scenario, const ScenarioInputs& inputs) {
  scenario.validate();
  if (inputs.targets.size() != inputs.activations.size()) {
    throw InputError("scenario inputs: activation and target counts differ");
  }
  ScenarioRunner runner(scenario_params(scenario), scenario.servo, scenario.proportional,
                        scenario.tick, StepOptions{scenario.max_substep});
  ScenarioRecord rec;
  rec.rows.reserve(inputs.activations.size());
  for (std::size_t i = 0; i < inputs.activations.size(); ++i) {
    rec.rows.push_back(runner.step(static_cast<double>(i) * scenario.tick, inputs.activations[i],
                                   inputs.targets[i]));
  }
  return rec;
}

namespace {

SectionRmse section_rmse(const Scenario& scenario, const ScenarioRecord& record,
                         double RecordRow::*column) {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<bool> relax;
  std::vector<bool> active;
  for (const auto& r : record.rows) {
    a.push_back(r.*column);
    b.push_back(r.target);
    relax.push_back(in_any(scenario.relaxation_windows, r.t));
    active.push_back(in_any(scenario.active_windows, r.t));
  }
  auto masked = [&](const std::vector<bool>& m) -> std::optional<double> {
    if (std::none_of(m.begin(), m.end(), [](bool v) { return v; })) return std::nullopt;
    return baselines::rmse(a, b, m);
  };
  return {masked(relax), masked(active), baselines::rmse(a, b)};
}

nlohmann::json to_json(const SectionRmse& s) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"relaxation", opt(s.relaxation)}, {"active", opt(s.active)}, {"overall", opt(s.overall)}};
}

nlohmann::json windows_json(const std::vector<Window>& ws) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& w : ws) out.push_back({w.start, w.end});
  return out;
}

}  // namespace

std::optional<RmseTable> rmse_table(const Scenario& scenario, const ScenarioRecord& record) {
  if (record.rows.empty()) return std::nullopt;
  for (const auto& r : record.rows) {
    if (!std::isfinite(r.target)) return std::nullopt;
  }
  return RmseTable{section_rmse(scenario, record, &RecordRow::theta),
                   section_rmse(scenario, record, &RecordRow::theta_impedance),
                   section_rmse(scenario, record, &RecordRow::theta_proportional),
                   section_rmse(scenario, record, &RecordRow::motor_angle)};
}

nlohmann::json summary_json(const Scenario& scenario, const ScenarioRecord& record) {
  nlohmann::json doc{{"scenario", scenario.name},
                     {"preset", scenario.preset},
                     {"joint", scenario.joint},
                     {"tick", scenario.tick},
                     {"rows", record.rows.size()},
                     {"duration", record.rows.empty() ? 0.0 : record.rows.back().t},
                     {"seed", scenario.seed},
                     {"noise_std", scenario.noise_std},
                     {"relaxation_windows", windows_json(scenario.relaxation_windows)},
                     {"active_windows", windows_json(scenario.active_windows)}};
  if (const auto table = rmse_table(scenario, record)) {
    doc["rmse"] = {{"proposed", to_json(table->proposed)},
                   {"impedance", to_json(table->impedance)},
                   {"proportional", to_json(table->proportional)},
                   {"motor", to_json(table->motor)}};
  } else {
    doc["rmse"] = nullptr;
  }
  return doc;
}

}  // namespace lambdahand::scenario
