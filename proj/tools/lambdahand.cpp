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

// Command-line front end: simulate, evaluate, calibrate, serve.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lambdahand/errors.hpp"
#include "lambdahand/params_io.hpp"
#include "lambdahand/scenario/scenario.hpp"
#include "lambdahand/scenario/synth.hpp"
#include "lambdahand/server/server.hpp"
#include "lambdahand/signal/calibration.hpp"
#include "lambdahand/signal/pipeline.hpp"

namespace lh = lambdahand;
namespace sc = lambdahand::scenario;

namespace {

struct ScenarioArgs {
  std::string scenario = "input1";
  std::optional<std::string> preset;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise;
  std::optional<double> tick;
  std::optional<double> substep;
  std::string trace;
  std::string calibration;
  std::string servo;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& a) {
  cmd->add_option("-s,--scenario", a.scenario, "Bundled scenario name")
      ->capture_default_str();
  cmd->add_option("-p,--preset", a.preset, "Parameter preset name or JSON file");
  cmd->add_option("--seed", a.seed, "Seed for synthetic EMG noise");
  cmd->add_option("--noise", a.noise, "Synthetic EMG noise level (signal units)");
  cmd->add_option("--tick", a.tick, "Control tick override in seconds (<= 0.005)");
  cmd->add_option("--substep", a.substep, "Maximum integration substep in seconds");
  cmd->add_option("--trace", a.trace, "EMG trace CSV (t,ch1..chL); replaces --scenario")
      ->check(CLI::ExistingFile);
  cmd->add_option("--calibration", a.calibration, "Calibration JSON for EMG sources")
      ->check(CLI::ExistingFile);
  cmd->add_option("--servo", a.servo, "Servo config JSON")->check(CLI::ExistingFile);
}

sc::Scenario build_scenario(const ScenarioArgs& a) {
  sc::Scenario s;
  if (!a.trace.empty()) {
    const auto frames = lh::signal::read_emg_csv(a.trace);
    if (frames.empty()) throw lh::InputError(fmt::format("{}: no samples", a.trace));
    s.name = "trace";
    s.source = sc::SourceKind::Trace;
    s.trace = a.trace;
    s.duration = frames.back().timestamp - frames.front().timestamp;
  } else {
    s = sc::bundled_scenario(a.scenario);
  }
  if (!a.calibration.empty()) s.calibration = a.calibration;
  if (a.preset) s.preset = *a.preset;
  if (a.seed) s.seed = *a.seed;
  if (a.noise) s.noise_std = *a.noise;
  if (a.tick) s.tick = *a.tick;
  if (a.substep) s.max_substep = *a.substep;
  if (!a.servo.empty()) s.servo = sc::load_servo_config(a.servo);
  s.validate();
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lh::InputError(fmt::format("cannot write {}", path));
  out << text;
}

int cmd_simulate(const ScenarioArgs& a, const std::string& out, const std::string& summary) {
  const sc::Scenario s = build_scenario(a);
  spdlog::info("running {} ({} ticks, preset {})", s.name, sc::tick_count(s), s.preset);
  const sc::ScenarioRecord rec = sc::run_scenario(s);
  write_text(out, sc::record_csv(rec));
  if (!summary.empty()) write_text(summary, sc::summary_json(s, rec).dump(2) + "\n");
  return 0;
}

int cmd_evaluate(const ScenarioArgs& a, const std::string& record, const std::string& out) {
  const sc::Scenario s = build_scenario(a);
  const sc::ScenarioRecord rec = record.empty() ? sc::run_scenario(s) : sc::load_record_csv(record);
  const auto doc = sc::summary_json(s, rec);
  write_text(out, doc.dump(2) + "\n");
  if (doc["rmse"].is_null()) spdlog::warn("{} has no reference angle; no RMSE table", s.name);
  return 0;
}

int cmd_calibrate(const std::string& recording, bool synthetic, double noise, std::uint64_t seed,
                  const lh::signal::CalibrationProtocol& protocol, double fs, double fc,
                  double fth, const std::string& out) {
  std::vector<lh::signal::EmgFrame> frames;
  if (synthetic) {
    sc::SynthOptions opts;
    opts.sample_rate_hz = fs;
    opts.noise_std = noise;
    opts.seed = seed;
    frames = sc::synth_calibration_recording(lh::signal::default_calibration(), protocol, opts);
  } else {
    frames = lh::signal::read_emg_csv(recording);
  }
  const auto calib = lh::signal::calibrate(frames, protocol, fs, fc, fth);
  calib.validate();
  write_text(out, lh::signal::to_json(calib).dump(2) + "\n");
  return 0;
}

lh::server::SimServer* g_server = nullptr;

extern "C" void on_signal(int) {
  // stop() joins threads; hand it to a detached helper so the handler returns.
  if (g_server) std::thread([] { g_server->stop(); }).detach();
}

int cmd_serve(const lh::server::ServerConfig& cfg) {
  lh::server::SimServer srv(cfg);
  srv.start();
  std::printf("listening on ws://%s:%u\n", cfg.address.c_str(), srv.port());
  std::fflush(stdout);
  g_server = &srv;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  srv.wait();
  g_server = nullptr;
  spdlog::info("stopped after {} telemetry messages, {} overruns", srv.telemetry_sent(),
               srv.overruns());
  return 0;
}

int cmd_list() {
  std::cout << "scenarios:";
  for (const auto& n : sc::bundled_scenario_names()) std::cout << ' ' << n;
  std::cout << "\npresets:";
  for (const auto& n : lh::builtin_preset_names()) std::cout << ' ' << n;
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint impedance controller with relaxation hold: simulation and live server"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  ScenarioArgs sim_args;
  std::string sim_out;
  std::string sim_summary;
  auto* sim = app.add_subcommand("simulate", "Run a scenario and export the record CSV");
  add_scenario_options(sim, sim_args);
  sim->add_option("-o,--out", sim_out, "Record CSV path ('-' for stdout)")->required();
  sim->add_option("--summary", sim_summary, "Summary JSON path");

  ScenarioArgs eval_args;
  std::string eval_record;
  std::string eval_out;
  auto* eval = app.add_subcommand("evaluate", "Per-section RMSE table for a scenario");
  add_scenario_options(eval, eval_args);
  eval->add_option("--record", eval_record, "Existing record CSV instead of a fresh run")
      ->check(CLI::ExistingFile);
  eval->add_option("-o,--out", eval_out, "Summary JSON path (default stdout)");

  std::string cal_recording;
  bool cal_synthetic = false;
  double cal_noise = 0.0;
  std::uint64_t cal_seed = 0;
  lh::signal::CalibrationProtocol protocol;
  double cal_fs = 500.0;
  double cal_fc = 8.0;
  double cal_fth = 0.02;
  std::string cal_out;
  auto* cal = app.add_subcommand("calibrate", "Derive a calibration file from a scripted recording");
  auto* rec_opt = cal->add_option("--recording", cal_recording, "Recording CSV (t,ch1..chL)")
                      ->check(CLI::ExistingFile);
  auto* syn_opt =
      cal->add_flag("--synthetic", cal_synthetic, "Use a generated recording of the default subject");
  rec_opt->excludes(syn_opt);
  cal->add_option("--noise", cal_noise, "Noise level for --synthetic");
  cal->add_option("--seed", cal_seed, "Seed for --synthetic");
  cal->add_option("--rest", protocol.rest_s, "Rest phase length (s)")->capture_default_str();
  cal->add_option("--mvc", protocol.mvc_s, "MVC phase length per motion (s)")
      ->capture_default_str();
  cal->add_option("--settle", protocol.settle_s, "Samples skipped at each phase start (s)")
      ->capture_default_str();
  cal->add_option("--sample-rate", cal_fs, "Sample rate (Hz)")->capture_default_str();
  cal->add_option("--cutoff", cal_fc, "Low-pass cutoff (Hz)")->capture_default_str();
  cal->add_option("--threshold", cal_fth, "Motion threshold on force information")
      ->capture_default_str();
  cal->add_option("-o,--out", cal_out, "Calibration JSON path (default stdout)");

  lh::server::ServerConfig srv_cfg;
  std::string autoplay;
  auto* serve = app.add_subcommand("serve", "Run the live fixed-rate server");
  serve->add_option("--address", srv_cfg.address, "Bind address")->capture_default_str();
  serve->add_option("--port", srv_cfg.port, "TCP port (0 = any free port)")->capture_default_str();
  serve->add_option("-p,--preset", srv_cfg.preset, "Built-in preset")->capture_default_str();
  serve->add_option("--autoplay", autoplay, "Bundled scenario to start at launch");
  serve->add_option("--speed", srv_cfg.speed, "Wall-clock speed-up of the loop")
      ->capture_default_str();

  app.add_subcommand("list", "List bundled scenarios and presets");

  CLI11_PARSE(app, argc, argv);
  // Records may go to stdout; keep logs on stderr.
  spdlog::set_default_logger(spdlog::stderr_color_mt("lambdahand"));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  spdlog::set_pattern("[%l] %v");

  try {
    if (*sim) return cmd_simulate(sim_args, sim_out, sim_summary);
    if (*eval) return cmd_evaluate(eval_args, eval_record, eval_out);
    if (*cal) {
      if (!cal_synthetic && cal_recording.empty()) {
        throw lh::InputError("calibrate needs --recording or --synthetic");
      }
      return cmd_calibrate(cal_recording, cal_synthetic, cal_noise, cal_seed, protocol, cal_fs,
                           cal_fc, cal_fth, cal_out);
    }
    if (*serve) {
      if (!autoplay.empty()) srv_cfg.autoplay = autoplay;
      return cmd_serve(srv_cfg);
    }
    return cmd_list();
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
