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

#include "lambdahand/signal/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "lambdahand/errors.hpp"

namespace lambdahand::signal {

namespace {

// Rounding residue of the primed filter; anything below is rest.
constexpr double kNormalizedFloor = 1e-12;

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

}  // namespace

MuscleActivation ProcessedFrame::activation() const {
  switch (motion) {
    case Direction::Flexion:
      return MuscleActivation::make(alpha, 0.0, motion);
    case Direction::Extension:
      return MuscleActivation::make(0.0, alpha, motion);
    case Direction::NoMotion:
      break;
  }
  return {};
}

std::vector<double> normalize(const CalibrationProfile& calib, std::span<const double> filtered) {
  if (filtered.size() != calib.channel_count()) {
    throw InputError(
        fmt::format("expected {} channels, got {}", calib.channel_count(), filtered.size()));
  }
  std::vector<double> out(filtered.size());
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    const double span = calib.mvc_level[i] - calib.rest_level[i];
    if (!(span > 0.0)) {
      throw ConfigError(fmt::format("channel {}: mvc level must exceed rest level", i + 1));
    }
    const double v = std::clamp((filtered[i] - calib.rest_level[i]) / span, 0.0, 1.0);
    out[i] = v < kNormalizedFloor ? 0.0 : v;
  }
  return out;
}

std::optional<std::vector<double>> emg_pattern(std::span<const double> normalized) {
  const double sum = std::accumulate(normalized.begin(), normalized.end(), 0.0);
  if (!(sum > 0.0)) return std::nullopt;
  std::vector<double> out(normalized.size());
  std::transform(normalized.begin(), normalized.end(), out.begin(),
                 [sum](double v) { return v / sum; });
  return out;
}

double force_information(std::span<const double> normalized) {
  if (normalized.empty()) return 0.0;
  return std::accumulate(normalized.begin(), normalized.end(), 0.0) /
         static_cast<double>(normalized.size());
}

TemplateClassifier::TemplateClassifier(std::vector<MotionClass> classes)
    : classes_(std::move(classes)) {
  if (classes_.empty()) throw ConfigError("template classifier needs at least one class");
}

std::size_t TemplateClassifier::classify(std::span<const double> pattern) {
  constexpr double kTieTolerance = 1e-12;
  std::vector<double> score(classes_.size());
  double best = -2.0;
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    score[k] = cosine_similarity(pattern, classes_[k].pattern_template);
    best = std::max(best, score[k]);
  }
  std::size_t chosen = classes_.size();
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    if (best - score[k] > kTieTolerance) continue;
    if (chosen == classes_.size()) chosen = k;
    if (previous_ && *previous_ == k) {
      chosen = k;
      break;
    }
  }
  previous_ = chosen;
  return chosen;
}

Classification classify(std::span<const double> pattern, double force,
                        const CalibrationProfile& calib, Classifier& classifier) {
  if (calib.classes.empty()) throw ConfigError("no motion classes registered");
  if (!(force > calib.f_threshold) || pattern.empty()) return {};
  const std::size_t k = classifier.classify(pattern);
  if (k >= calib.classes.size()) {
    throw ConfigError(fmt::format("classifier returned class {} of {}", k, calib.classes.size()));
  }
  return {calib.classes[k].direction, k};
}

double contraction_level(double force, const MotionClass& motion) {
  return clamp_alpha(force / motion.f_max);
}

double contraction_level(double force, Direction motion, const CalibrationProfile& calib) {
  if (motion == Direction::NoMotion) {
    throw DomainError("contraction level is undefined without a motion");
  }
  return contraction_level(force, calib.class_for(motion));
}

EmgPipeline::EmgPipeline(CalibrationProfile calib, std::unique_ptr<Classifier> classifier)
    : calib_((calib.validate(), std::move(calib))),
      classifier_(classifier ? std::move(classifier)
                             : std::make_unique<TemplateClassifier>(calib_.classes)),
      filter_(calib_.channel_count(), calib_.sample_rate_hz, calib_.cutoff_hz) {}

ProcessedFrame EmgPipeline::process(const EmgFrame& frame) {
  if (frame.channels.size() != calib_.channel_count()) {
    throw InputError(fmt::format("frame at t={} has {} channels, expected {}", frame.timestamp,
                                 frame.channels.size(), calib_.channel_count()));
  }
  if (last_timestamp_ && !(frame.timestamp > *last_timestamp_)) {
    throw InputError(fmt::format("timestamp {} does not increase (previous {})", frame.timestamp,
                                 *last_timestamp_));
  }
  last_timestamp_ = frame.timestamp;

  ProcessedFrame out;
  out.timestamp = frame.timestamp;
  out.normalized = normalize(calib_, filter_.process(frame.channels));
  out.force = force_information(out.normalized);
  if (auto pattern = emg_pattern(out.normalized)) out.pattern = std::move(*pattern);
  const Classification cls = classify(out.pattern, out.force, calib_, *classifier_);
  out.motion = cls.motion;
  out.class_index = cls.class_index;
  if (cls.class_index) out.alpha = contraction_level(out.force, calib_.classes[*cls.class_index]);
  return out;
}

void EmgPipeline::reset() {
  filter_.reset();
  classifier_->reset();
  last_timestamp_.reset();
}

std::vector<EmgFrame> read_emg_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open trace {}", path.string()));
  std::string line;
  if (!std::getline(in, line)) throw InputError(fmt::format("{}: empty trace", path.string()));
  std::size_t columns = 0;
  {
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) ++columns;
    if (columns < 2 || line.rfind("t,", 0) != 0) {
      throw InputError(fmt::format("{}: header must be t,ch1..chL", path.string()));
    }
  }
  std::vector<EmgFrame> frames;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        throw InputError(fmt::format("{}:{}: bad number '{}'", path.string(), lineno, cell));
      }
      values.push_back(v);
    }
    if (values.size() != columns) {
      throw InputError(fmt::format("{}:{}: expected {} columns, got {}", path.string(), lineno,
                                   columns, values.size()));
    }
    frames.push_back({values.front(), std::vector<double>(values.begin() + 1, values.end())});
  }
  return frames;
}

void write_emg_csv(const std::filesystem::path& path, const std::vector<EmgFrame>& frames) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write trace {}", path.string()));
  const std::size_t channels = frames.empty() ? 0 : frames.front().channels.size();
  out << 't';
  for (std::size_t i = 0; i < channels; ++i) out << ",ch" << (i + 1);
  out << '\n';
  for (const auto& f : frames) {
    out << fmt::format("{:.9g}", f.timestamp);
    for (double v : f.channels) out << fmt::format(",{:.9g}", v);
    out << '\n';
  }
}

}  // namespace lambdahand::signal
