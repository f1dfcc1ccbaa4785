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

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lambdahand/activation.hpp"
#include "lambdahand/signal/butterworth.hpp"
#include "lambdahand/signal/calibration.hpp"

namespace lambdahand::signal {

struct ProcessedFrame {
  double timestamp = 0.0;
  std::vector<double> normalized;
  std::vector<double> pattern;  // empty when the pattern is undefined (all-zero input)
  double force = 0.0;
  Direction motion = Direction::NoMotion;
  std::optional<std::size_t> class_index;
  double alpha = 0.0;

  // Contraction level on the classified direction only.
  MuscleActivation activation() const;
};

// clamp((x - rest) / (mvc - rest), 0, 1) per channel.
std::vector<double> normalize(const CalibrationProfile& calib, std::span<const double> filtered);

// Channel shares of the normalized signal; nullopt when every channel is zero.
std::optional<std::vector<double>> emg_pattern(std::span<const double> normalized);

// Mean of the normalized channels.
double force_information(std::span<const double> normalized);

// Maps a pattern to one of the calibrated classes.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::size_t classify(std::span<const double> pattern) = 0;
  virtual void reset() {}
};

// Cosine-similarity argmax against the calibration templates. Exact ties go to
// the class returned by the previous call when it is among the tied ones,
// otherwise to the lowest index.
class TemplateClassifier final : public Classifier {
 public:
  // Throws ConfigError when no templates are registered.
  explicit TemplateClassifier(std::vector<MotionClass> classes);

  std::size_t classify(std::span<const double> pattern) override;
  void reset() override { previous_.reset(); }

 private:
  std::vector<MotionClass> classes_;
  std::optional<std::size_t> previous_;
};

struct Classification {
  Direction motion = Direction::NoMotion;
  std::optional<std::size_t> class_index;
};

// NoMotion iff force <= f_threshold (or the pattern is undefined); otherwise the
// classifier's class. Throws ConfigError when the profile has no classes.
Classification classify(std::span<const double> pattern, double force,
                        const CalibrationProfile& calib, Classifier& classifier);

// clamp(force / f_max, 0, kAlphaCap). Throws DomainError for NoMotion.
double contraction_level(double force, Direction motion, const CalibrationProfile& calib);
double contraction_level(double force, const MotionClass& motion);

// Streaming chain: low-pass, normalize, pattern, force, classify, contraction
// level. One instance per stream.
class EmgPipeline {
 public:
  explicit EmgPipeline(CalibrationProfile calib, std::unique_ptr<Classifier> classifier = nullptr);

  // Throws InputError on channel-count mismatch or non-increasing timestamps.
  ProcessedFrame process(const EmgFrame& frame);
  void reset();

  const CalibrationProfile& calibration() const noexcept { return calib_; }

 private:
  CalibrationProfile calib_;
  std::unique_ptr<Classifier> classifier_;
  MultiChannelLowpass filter_;
  std::optional<double> last_timestamp_;
};

// CSV with header t,ch1..chL.
std::vector<EmgFrame> read_emg_csv(const std::filesystem::path& path);
void write_emg_csv(const std::filesystem::path& path, const std::vector<EmgFrame>& frames);

}  // namespace lambdahand::signal
