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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <sstream>

#include "lambdahand/errors.hpp"
#include "lambdahand/scenario/scenario.hpp"
#include "lambdahand/scenario/synth.hpp"
#include "lambdahand/signal/pipeline.hpp"

using namespace lambdahand;
using namespace lambdahand::scenario;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_CASE("input 1 examples") {
  auto [f, e] = gen_input1(2.5);
  CHECK(f == doctest::Approx(0.25));
  CHECK(e == 0.0);
  std::tie(f, e) = gen_input1(7.0);
  CHECK(f == 0.0);
  CHECK(e == 0.0);
  std::tie(f, e) = gen_input1(12.0);
  CHECK(f == 0.0);
  CHECK(e == doctest::Approx(0.2));
  std::tie(f, e) = gen_input1(25.0);
  CHECK(f == doctest::Approx(0.5));
  std::tie(f, e) = gen_input1(30.0);
  CHECK(f == doctest::Approx(1.0));
  CHECK_THROWS_AS(gen_input1(-0.1), DomainError);
  CHECK_THROWS_AS(gen_input1(30.1), DomainError);
}

TEST_CASE("input 2 examples") {
  auto [f, e] = gen_input2(0.0);
  CHECK(std::abs(f) < 1e-15);
  CHECK(e == 0.0);
  // Raised sines in antiphase: the flexor peaks at 5 s while the extensor sits
  // at its trough, and the roles swap at 10 s.
  std::tie(f, e) = gen_input2(5.0);
  CHECK(f == doctest::Approx(1.0));
  CHECK(std::abs(e) < 1e-12);
  std::tie(f, e) = gen_input2(10.0);
  CHECK(std::abs(f) < 1e-12);
  CHECK(e == doctest::Approx(1.0));
  for (double t = 5.0; t <= 30.0; t += 0.37) {
    std::tie(f, e) = gen_input2(t);
    CHECK(f + e == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(gen_input2(31.0), DomainError);
}

TEST_CASE("task profile examples") {
  const TaskProfile t1 = gen_task_profile(1);
  CHECK(t1.duration() == 15.0);
  CHECK(t1.target(14.0) == -pi / 3.0);
  CHECK(t1.target(2.0) == 0.0);
  CHECK(t1.target(9.0) == -pi / 3.0);
  CHECK(t1.target(5.5) == doctest::Approx(-pi / 6.0));
  const TaskProfile t2 = gen_task_profile(2);
  CHECK(t2.duration() == 19.0);
  CHECK(t2.target(13.0) == 7.0 * pi / 18.0);
  CHECK(t2.target(1.0) == 0.0);
  CHECK(t2.target(9.0) == -pi / 4.0);
  CHECK(t2.target(17.0) == 7.0 * pi / 18.0);
  CHECK_THROWS_AS(gen_task_profile(3), InputError);

  CHECK(t1.relaxation_windows() == std::vector<Window>{{10.0, 15.0}});
  CHECK(t1.active_windows() == std::vector<Window>{{5.0, 10.0}});
  CHECK(t2.relaxation_windows() == std::vector<Window>{{7.0, 11.0}, {15.0, 19.0}});
  CHECK(t2.target_series(0.005).size() == 3801);
}

TEST_CASE("target series is continuous") {
  for (int task : {1, 2}) {
    const auto series = gen_task_profile(task).target_series(0.005);
    for (std::size_t i = 1; i < series.size(); ++i) {
      CHECK(std::abs(series[i] - series[i - 1]) < 0.02);
    }
  }
}

TEST_CASE("planned levels reproduce the targets") {
  const auto calib = signal::default_calibration();
  for (const auto& params : {ImpedanceParams::wrist()}) {
    for (int task : {1, 2}) {
      const TaskProfile profile = gen_task_profile(task);
      const ActivationPlan plan = plan_activations(profile, calib, params);
      std::size_t k = 0;
      for (const auto& seg : profile.segments) {
        if (seg.kind != SegmentKind::Move) continue;
        REQUIRE(k < plan.moves.size());
        CHECK(plan.moves[k].reachable);
        CHECK(plan.moves[k].predicted == doctest::Approx(seg.to).epsilon(1e-12));
        CHECK(plan.moves[k].level > 0.0);
        CHECK(plan.moves[k].level <= kAlphaCap);
        ++k;
      }
      CHECK(k == plan.moves.size());
    }
  }

  TaskProfile far;
  far.segments = {{SegmentKind::Move, Direction::Flexion, 0.0, 2.0, 0.0, -3.0}};
  const ActivationPlan plan = plan_activations(far, calib, ImpedanceParams::wrist());
  CHECK_FALSE(plan.moves[0].reachable);
  CHECK(plan.moves[0].level == kAlphaCap);
}

TEST_CASE("predicted equilibrium matches a scripted controller run") {
  const ImpedanceParams p = ImpedanceParams::wrist();
  const double a0 = 0.04;
  const double level = 0.6;
  // Hold at +0.3 rad (anatomical) reached by a prior extension, then flex.
  JointController ctrl(p);
  for (int i = 1; i <= 200; ++i) ctrl.tick({0.0, 0.4 * i / 200.0, Direction::Extension});
  const double held = anatomical_from_model(ctrl.state().prev_equilibrium);
  ctrl.tick({});
  for (int i = 0; i <= 300; ++i) {
    ctrl.tick({a0 + (level - a0) * i / 300.0, 0.0, Direction::Flexion});
  }
  CHECK(anatomical_from_model(ctrl.last_output().theta_eq) ==
        doctest::Approx(predicted_equilibrium(Direction::Flexion, level, a0, held, p))
            .epsilon(1e-12));
}

TEST_CASE("synthetic emg bookkeeping") {
  const auto calib = signal::default_calibration();
  TaskProfile rest;
  rest.segments = {{SegmentKind::Rest, Direction::NoMotion, 0.0, 4.0, 0.0, 0.0}};
  for (const auto& f : synth_emg(rest, calib, plan_activations(rest, calib, ImpedanceParams::wrist()))) {
    CHECK(f.channels == calib.rest_level);
  }

  const TaskProfile t1 = gen_task_profile(1);
  const ActivationPlan plan = plan_activations(t1, calib, ImpedanceParams::wrist());
  const auto frames = synth_emg(t1, calib, plan);
  CHECK(frames.size() == 7501);
  const Window active{plan.moves[0].start, plan.moves[0].end + plan.release_s};
  for (const auto& f : frames) {
    const bool on = f.timestamp > active.start && f.timestamp < active.end;
    CHECK((f.channels[0] > calib.rest_level[0]) == on);
    CHECK(f.channels[0] <= calib.mvc_level[0]);
  }
  // At full plateau the pipeline sees the planned level.
  signal::EmgPipeline pipe(calib);
  signal::ProcessedFrame out;
  for (const auto& f : frames) {
    out = pipe.process(f);
    if (f.timestamp >= 9.9) break;
  }
  CHECK(out.motion == Direction::Flexion);
  CHECK(out.alpha == doctest::Approx(plan.moves[0].level).epsilon(1e-9));
}

TEST_CASE("synthetic emg noise is seeded") {
  const auto calib = signal::default_calibration();
  const TaskProfile t2 = gen_task_profile(2);
  const ActivationPlan plan = plan_activations(t2, calib, ImpedanceParams::wrist());
  SynthOptions opts;
  opts.noise_std = 0.05;
  opts.seed = 42;
  const auto a = synth_emg(t2, calib, plan, opts);
  const auto b = synth_emg(t2, calib, plan, opts);
  CHECK(a == b);
  opts.seed = 43;
  CHECK(synth_emg(t2, calib, plan, opts) != a);
  for (const auto& f : a) {
    for (double v : f.channels) CHECK(v >= 0.0);
  }
  opts.noise_std = -1.0;
  CHECK_THROWS_AS(synth_emg(t2, calib, plan, opts), ConfigError);
}

TEST_CASE("servo basics") {
  const ServoConfig servo;
  PlantState s;
  s.angle = 0.4;
  s = pid_plant_step(servo, 0.4, s);
  CHECK(s.p_term == 0.0);
  CHECK(s.command == servo.ki * s.integral);

  ServoConfig bad = servo;
  bad.kd = 0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(settling_time(bad, 0.0, 1.0), ConfigError);
  bad = servo;
  bad.period = 0.01;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  CHECK(load_servo_config(std::filesystem::path(LAMBDAHAND_DATA_DIR) / "servo.json") == servo);
  CHECK(servo_config_from_json(to_json(servo)) == servo);
  CHECK_THROWS_AS(servo_config_from_json({{"kd", 1.0}}), ConfigError);
}

TEST_CASE("servo step settles at the recorded time") {
  const ServoConfig servo;
  const double ts = settling_time(servo, 0.0, 1.0);
  CHECK(ts > 0.0);
  CHECK(ts == doctest::Approx(0.825).epsilon(1e-9));
  // Never settles with zero gains.
  ServoConfig off = servo;
  off.kp = 0.0;
  off.ki = 0.0;
  CHECK(settling_time(off, 0.0, 1.0, 0.02, 2.0) < 0.0);
}

TEST_CASE("servo stays in range and does not wind up") {
  const ServoConfig servo;
  PlantState s;
  for (int i = 0; i < 2000; ++i) {
    s = pid_plant_step(servo, 5.0, s);
    CHECK(s.angle <= servo.max_angle);
  }
  CHECK(s.angle == doctest::Approx(servo.max_angle).epsilon(1e-6));
  const double windup = s.integral;
  CHECK(servo.ki * windup < 2.0 * servo.max_angle);
  // Back to zero without a long saturated tail.
  double t_back = 0.0;
  for (int i = 1; i < 2000; ++i) {
    s = pid_plant_step(servo, 0.0, s);
    if (std::abs(s.angle) > 0.02) t_back = i * servo.period;
  }
  CHECK(t_back < 1.5);
}

TEST_CASE("record shape") {
  Scenario s = bundled_scenario("input1");
  const ScenarioRecord r = run_scenario(s);
  CHECK(r.rows.size() == 6001);
  for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].t > r.rows[i - 1].t);
  CHECK(std::isnan(r.rows[0].target));

  s.duration = 0.0;
  s.relaxation_windows.clear();
  const ScenarioRecord single = run_scenario(s);
  CHECK(single.rows.size() == 1);
  CHECK(single.rows[0].t == 0.0);
}

TEST_CASE("record csv round trip") {
  for (const std::string name : {"input2", "task2_noisy"}) {
    const ScenarioRecord r = run_scenario(bundled_scenario(name));
    const std::string csv = record_csv(r);
    std::istringstream in(csv);
    const ScenarioRecord back = read_record_csv(in);
    REQUIRE(back.rows.size() == r.rows.size());
    CHECK(record_csv(back) == csv);
    for (std::size_t i = 0; i < r.rows.size(); i += 97) {
      CHECK(back.rows[i].theta == doctest::Approx(r.rows[i].theta).epsilon(1e-8));
      CHECK(back.rows[i].motion == r.rows[i].motion);
      CHECK(back.rows[i].gate == r.rows[i].gate);
    }
  }
  std::istringstream bad("t,alpha\n0,1\n");
  CHECK_THROWS_AS(read_record_csv(bad), InputError);
  const auto& cols = record_columns();
  std::string header;
  for (std::size_t i = 0; i < cols.size(); ++i) header += (i ? "," : "") + cols[i];
  std::istringstream short_row(header + "\n0,1,2\n");
  CHECK_THROWS_AS(read_record_csv(short_row), InputError);
}

TEST_CASE("input 1 holds the equilibrium while relaxed") {
  const Scenario s = bundled_scenario("input1");
  const ScenarioRecord r = run_scenario(s);
  for (const auto& w : s.relaxation_windows) {
    double first = std::numeric_limits<double>::quiet_NaN();
    for (const auto& row : r.rows) {
      if (!w.contains(row.t)) continue;
      if (std::isnan(first)) first = row.theta_eq;
      CHECK(row.theta_eq == first);
    }
    CHECK(std::abs(first) > 0.1);
  }
}

TEST_CASE("task 1 relaxation favours the proposed controller") {
  const Scenario s = bundled_scenario("task1");
  const ScenarioRecord r = run_scenario(s);
  const auto table = rmse_table(s, r);
  REQUIRE(table);
  CHECK(*table->proposed.relaxation < *table->impedance.relaxation);
  CHECK(*table->proposed.relaxation < *table->proportional.relaxation);
}

TEST_CASE("baseline decays while the proposed controller holds") {
  for (const std::string name : {"task1", "task2"}) {
    const Scenario s = bundled_scenario(name);
    const ScenarioRecord r = run_scenario(s);
    for (const auto& w : s.relaxation_windows) {
      CAPTURE(w.start);
      // Settled hold of the proposed controller.
      const double settle = w.start + 0.5;
      double hold = std::numeric_limits<double>::quiet_NaN();
      std::vector<double> envelope;
      double block_max = 0.0;
      double block_start = settle;
      for (const auto& row : r.rows) {
        if (!w.contains(row.t) || row.t < settle) continue;
        if (std::isnan(hold)) hold = row.theta;
        CHECK(std::abs(row.theta - hold) < 1e-3);
        if (row.t >= block_start + 0.25) {
          envelope.push_back(block_max);
          block_max = 0.0;
          block_start += 0.25;
        }
        block_max = std::max(block_max, std::abs(row.theta_impedance));
      }
      CHECK(std::abs(hold) > 0.5);
      REQUIRE(envelope.size() >= 3);
      for (std::size_t i = 1; i < envelope.size(); ++i) CHECK(envelope[i] <= envelope[i - 1]);
      CHECK(envelope.back() < 1e-3);
    }
  }
}

TEST_CASE("scenario runner matches the bare controller") {
  const Scenario s = bundled_scenario("input2");
  const ScenarioInputs in = prepare_inputs(s);
  const ScenarioRecord r = run_scenario(s, in);
  JointController ctrl(ImpedanceParams::wrist());
  for (std::size_t i = 0; i < in.activations.size(); ++i) {
    REQUIRE(r.rows[i].theta == anatomical_from_model(ctrl.joint().theta));
    const TickOutput& out = ctrl.tick(in.activations[i]);
    REQUIRE(r.rows[i].theta_eq == anatomical_from_model(out.theta_eq));
  }
}

TEST_CASE("summary json") {
  const Scenario s = bundled_scenario("task2");
  const auto doc = summary_json(s, run_scenario(s));
  CHECK(doc["scenario"] == "task2");
  CHECK(doc["rows"] == 3801);
  for (const char* method : {"proposed", "impedance", "proportional", "motor"}) {
    for (const char* section : {"relaxation", "active", "overall"}) {
      CHECK(doc["rmse"][method][section].is_number());
    }
  }
  const Scenario i1 = bundled_scenario("input1");
  CHECK(summary_json(i1, run_scenario(i1))["rmse"].is_null());
}

TEST_CASE("bundled scenarios and validation") {
  for (const auto& name : bundled_scenario_names()) {
    CAPTURE(name);
    const Scenario s = bundled_scenario(name);
    CHECK_NOTHROW(s.validate());
    CHECK(s.name == name);
  }
  CHECK_THROWS_AS(bundled_scenario("input3"), InputError);

  Scenario s = bundled_scenario("input1");
  s.tick = 0.01;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = bundled_scenario("input1");
  s.duration = 31.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = bundled_scenario("input1");
  s.relaxation_windows.push_back({20.0, 40.0});
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = bundled_scenario("input1");
  s.preset = "elbow";
  CHECK_THROWS_AS(run_scenario(s), InputError);
  s = bundled_scenario("input1");
  s.joint = 1;
  CHECK_THROWS_AS(run_scenario(s), ConfigError);
  s = bundled_scenario("input1_finger");
  s.joint = 4;
  CHECK_NOTHROW(run_scenario(s));
}

TEST_CASE("seeded runs are reproducible") {
  for (const auto& name : bundled_scenario_names()) {
    const Scenario s = bundled_scenario(name);
    CHECK(record_csv(run_scenario(s)) == record_csv(run_scenario(s)));
  }
  Scenario a = bundled_scenario("task1_noisy");
  Scenario b = a;
  b.seed += 1;
  CHECK(record_csv(run_scenario(a)) != record_csv(run_scenario(b)));
}

TEST_CASE("trace files drive the same pipeline") {
  const auto calib = signal::default_calibration();
  const TaskProfile t1 = gen_task_profile(1);
  const auto frames = synth_emg(t1, calib, plan_activations(t1, calib, ImpedanceParams::wrist()));
  const auto dir = std::filesystem::temp_directory_path();
  const auto trace = dir / "lambdahand_trace_task1.csv";
  const auto calib_path = dir / "lambdahand_trace_calib.json";
  signal::write_emg_csv(trace, frames);
  signal::save_calibration(calib, calib_path);

  Scenario s;
  s.name = "trace";
  s.source = SourceKind::Trace;
  s.trace = trace;
  s.calibration = calib_path;
  s.duration = t1.duration();
  const ScenarioInputs from_trace = prepare_inputs(s);
  const ScenarioInputs from_task = prepare_inputs(bundled_scenario("task1"));
  REQUIRE(from_trace.activations.size() == from_task.activations.size());
  for (std::size_t i = 0; i < from_trace.activations.size(); ++i) {
    CHECK(from_trace.activations[i].direction == from_task.activations[i].direction);
    CHECK(from_trace.activations[i].alpha_flex ==
          doctest::Approx(from_task.activations[i].alpha_flex).epsilon(1e-6));
  }
  CHECK(std::isnan(from_trace.targets.front()));
  std::filesystem::remove(trace);
  std::filesystem::remove(calib_path);
}

TEST_CASE("calibration recording recovers the subject profile") {
  const auto ref = signal::default_calibration();
  const signal::CalibrationProtocol protocol;
  const auto rec = synth_calibration_recording(ref, protocol);
  CHECK(rec.size() == 7500);
  const auto got = signal::calibrate(rec, protocol);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(got.classes[k].f_max == doctest::Approx(ref.classes[k].f_max).epsilon(1e-9));
    CHECK(got.classes[k].pattern_template[0] ==
          doctest::Approx(ref.classes[k].pattern_template[0]).epsilon(1e-9));
  }
  SynthOptions noisy;
  noisy.noise_std = 0.01;
  noisy.seed = 5;
  const auto got_noisy = signal::calibrate(synth_calibration_recording(ref, protocol, noisy), protocol);
  CHECK(got_noisy.classes[0].f_max == doctest::Approx(ref.classes[0].f_max).epsilon(0.02));
  CHECK_NOTHROW(got_noisy.validate());
}
