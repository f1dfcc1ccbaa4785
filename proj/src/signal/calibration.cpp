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

#include "lambdahand/signal/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "lambdahand/errors.hpp"
#include "lambdahand/signal/butterworth.hpp"
#include "lambdahand/signal/pipeline.hpp"

namespace lambdahand::signal {

void CalibrationProfile::validate() const {
  const std::size_t n = rest_level.size();
  if (n == 0) throw ConfigError("calibration has no channels");
  if (mvc_level.size() != n) {
    throw ConfigError(fmt::format("rest_level has {} channels, mvc_level {}", n, mvc_level.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(rest_level[i]) || !std::isfinite(mvc_level[i]) ||
        !(mvc_level[i] > rest_level[i])) {
      throw ConfigError(fmt::format("channel {}: mvc level {} must exceed rest level {}", i + 1,
                                    mvc_level[i], rest_level[i]));
    }
  }
  if (!(sample_rate_hz > 0.0) || !(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 * sample_rate_hz)) {
    throw ConfigError(fmt::format("cutoff {} Hz must lie in (0, Nyquist) for fs = {} Hz",
                                  cutoff_hz, sample_rate_hz));
  }
  double min_f_max = 1.0;
  for (const auto& c : classes) {
    if (c.direction == Direction::NoMotion) {
      throw ConfigError(fmt::format("class '{}' must map to flexion or extension", c.label));
    }
    if (!(c.f_max > 0.0 && c.f_max <= 1.0)) {
      throw ConfigError(fmt::format("class '{}': f_max {} outside (0, 1]", c.label, c.f_max));
    }
    if (c.pattern_template.size() != n) {
      throw ConfigError(fmt::format("class '{}': template has {} channels, expected {}", c.label,
                                    c.pattern_template.size(), n));
    }
    min_f_max = std::min(min_f_max, c.f_max);
  }
  if (!(f_threshold > 0.0 && f_threshold < min_f_max)) {
    throw ConfigError(
        fmt::format("f_threshold {} must lie in (0, min f_max = {})", f_threshold, min_f_max));
  }
}

const MotionClass& CalibrationProfile::class_for(Direction direction) const {
  for (const auto& c : classes) {
    if (c.direction == direction) return c;
  }
  throw ConfigError(fmt::format("no calibrated class for direction {}", to_string(direction)));
}

CalibrationProfile default_calibration() {
  constexpr double kCrosstalk = 0.05;
  const double share_main = 1.0 / (1.0 + kCrosstalk);
  const double share_cross = kCrosstalk / (1.0 + kCrosstalk);
  const double f_max = (1.0 + kCrosstalk) / 2.0;
  CalibrationProfile c;
  c.rest_level = {0.05, 0.05};
  c.mvc_level = {1.0, 1.0};
  c.classes = {{"flexion", Direction::Flexion, f_max, {share_main, share_cross}},
               {"extension", Direction::Extension, f_max, {share_cross, share_main}}};
  return c;
}

nlohmann::json to_json(const CalibrationProfile& calib) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : calib.classes) {
    classes.push_back({{"label", c.label},
                       {"direction", std::string(to_string(c.direction))},
                       {"f_max", c.f_max},
                       {"template", c.pattern_template}});
  }
  return {{"channels", calib.channel_count()},
          {"sample_rate_hz", calib.sample_rate_hz},
          {"cutoff_hz", calib.cutoff_hz},
          {"f_threshold", calib.f_threshold},
          {"rest_level", calib.rest_level},
          {"mvc_level", calib.mvc_level},
          {"classes", classes}};
}

CalibrationProfile calibration_from_json(const nlohmann::json& doc) {
  CalibrationProfile c;
  try {
    c.rest_level = doc.at("rest_level").get<std::vector<double>>();
    c.mvc_level = doc.at("mvc_level").get<std::vector<double>>();
    c.f_threshold = doc.value("f_threshold", c.f_threshold);
    c.cutoff_hz = doc.value("cutoff_hz", c.cutoff_hz);
    c.sample_rate_hz = doc.value("sample_rate_hz", c.sample_rate_hz);
    for (const auto& item : doc.at("classes")) {
      MotionClass m;
      m.label = item.at("label").get<std::string>();
      const auto dir = parse_direction(item.at("direction").get<std::string>());
      if (!dir) throw ConfigError(fmt::format("class '{}': unknown direction", m.label));
      m.direction = *dir;
      m.f_max = item.at("f_max").get<double>();
      m.pattern_template = item.at("template").get<std::vector<double>>();
      c.classes.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("calibration document: {}", e.what()));
  }
  if (doc.contains("channels") && doc["channels"].get<std::size_t>() != c.channel_count()) {
    throw ConfigError("calibration 'channels' disagrees with rest_level length");
  }
  c.validate();
  return c;
}

CalibrationProfile load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open calibration file {}", path.string()));
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return calibration_from_json(doc);
}

void save_calibration(const CalibrationProfile& calib, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write calibration file {}", path.string()));
  out << to_json(calib).dump(2) << '\n';
}

CalibrationProfile calibrate(const std::vector<EmgFrame>& recording,
                             const CalibrationProtocol& protocol, double sample_rate_hz,
                             double cutoff_hz, double f_threshold) {
  if (recording.empty()) throw InputError("calibration recording is empty");
  const std::size_t channels = recording.front().channels.size();
  const std::size_t phases = 1 + protocol.motions.size();

  std::vector<std::vector<double>> sums(phases, std::vector<double>(channels, 0.0));
  std::vector<std::size_t> counts(phases, 0);

  MultiChannelLowpass filter(channels, sample_rate_hz, cutoff_hz);
  const double t0 = recording.front().timestamp;
  for (const auto& frame : recording) {
    const std::vector<double> y = filter.process(frame.channels);
    const double t = frame.timestamp - t0;
    std::size_t phase = 0;
    double phase_start = 0.0;
    if (t >= protocol.rest_s) {
      const auto k = static_cast<std::size_t>((t - protocol.rest_s) / protocol.mvc_s);
      if (k >= protocol.motions.size()) continue;
      phase = 1 + k;
      phase_start = protocol.rest_s + static_cast<double>(k) * protocol.mvc_s;
    }
    if (t - phase_start < protocol.settle_s) continue;
    for (std::size_t i = 0; i < channels; ++i) sums[phase][i] += y[i];
    ++counts[phase];
  }

  std::vector<std::vector<double>> means(phases, std::vector<double>(channels, 0.0));
  for (std::size_t p = 0; p < phases; ++p) {
    if (counts[p] == 0) {
      throw InputError(fmt::format("calibration phase {} has no settled samples", p));
    }
    for (std::size_t i = 0; i < channels; ++i) {
      means[p][i] = sums[p][i] / static_cast<double>(counts[p]);
    }
  }

  CalibrationProfile calib;
  calib.sample_rate_hz = sample_rate_hz;
  calib.cutoff_hz = cutoff_hz;
  calib.f_threshold = f_threshold;
  calib.rest_level = means[0];
  calib.mvc_level.assign(channels, 0.0);
  for (std::size_t i = 0; i < channels; ++i) {
    for (std::size_t p = 1; p < phases; ++p) {
      calib.mvc_level[i] = std::max(calib.mvc_level[i], means[p][i]);
    }
    if (!(calib.mvc_level[i] > calib.rest_level[i])) {
      throw InputError(fmt::format("channel {} shows no contraction above rest", i + 1));
    }
  }
  for (std::size_t k = 0; k < protocol.motions.size(); ++k) {
    const std::vector<double> n = normalize(calib, means[k + 1]);
    const auto pattern = emg_pattern(n);
    if (!pattern) {
      throw InputError(fmt::format("motion '{}' shows no activity", protocol.motions[k].first));
    }
    calib.classes.push_back({protocol.motions[k].first, protocol.motions[k].second,
                             force_information(n), *pattern});
  }
  calib.validate();
  return calib;
}

}  // namespace lambdahand::signal
