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

#include "lambdahand/signal/butterworth.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "lambdahand/errors.hpp"

namespace lambdahand::signal {

BiquadCoefficients butterworth_lowpass(double sample_rate_hz, double cutoff_hz) {
  if (!(sample_rate_hz > 0.0) || !(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 * sample_rate_hz)) {
    throw ConfigError(fmt::format("cutoff {} Hz must lie in (0, Nyquist) for fs = {} Hz",
                                  cutoff_hz, sample_rate_hz));
  }
  const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
  const double k2 = k * k;
  const double norm = 1.0 / (1.0 + std::numbers::sqrt2 * k + k2);
  BiquadCoefficients c;
  c.b0 = k2 * norm;
  c.b1 = 2.0 * c.b0;
  c.b2 = c.b0;
  c.a1 = 2.0 * (k2 - 1.0) * norm;
  c.a2 = (1.0 - std::numbers::sqrt2 * k + k2) * norm;
  return c;
}

void Biquad::prime(double x) noexcept {
  z2_ = (c_.b2 - c_.a2) * x;
  z1_ = x - c_.b0 * x;
}

MultiChannelLowpass::MultiChannelLowpass(std::size_t channels, double sample_rate_hz,
                                         double cutoff_hz)
    : sections_(channels, Biquad(butterworth_lowpass(sample_rate_hz, cutoff_hz))) {}

std::vector<double> MultiChannelLowpass::process(std::span<const double> sample) {
  if (sample.size() != sections_.size()) {
    throw InputError(fmt::format("expected {} channels, got {}", sections_.size(), sample.size()));
  }
  if (!primed_) {
    for (std::size_t i = 0; i < sections_.size(); ++i) sections_[i].prime(sample[i]);
    primed_ = true;
  }
  std::vector<double> out(sample.size());
  for (std::size_t i = 0; i < sections_.size(); ++i) out[i] = sections_[i].process(sample[i]);
  return out;
}

}  // namespace lambdahand::signal
