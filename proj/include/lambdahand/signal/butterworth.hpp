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
#include <span>
#include <vector>

namespace lambdahand::signal {

// Transfer function (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2).
struct BiquadCoefficients {
  double b0 = 1.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
};

// Second-order Butterworth low-pass via the bilinear transform with
// frequency prewarping. Throws ConfigError unless 0 < cutoff < fs / 2.
BiquadCoefficients butterworth_lowpass(double sample_rate_hz, double cutoff_hz);

// Direct form II transposed section.
class Biquad {
 public:
  explicit Biquad(const BiquadCoefficients& c) : c_(c) {}

  double process(double x) noexcept {
    const double y = c_.b0 * x + z1_;
    z1_ = c_.b1 * x - c_.a1 * y + z2_;
    z2_ = c_.b2 * x - c_.a2 * y;
    return y;
  }

  // Zero state.
  void reset() noexcept { z1_ = z2_ = 0.0; }
  // State of a filter that has seen x forever.
  void prime(double x) noexcept;

  const BiquadCoefficients& coefficients() const noexcept { return c_; }

 private:
  BiquadCoefficients c_;
  double z1_ = 0.0;
  double z2_ = 0.0;
};

// One low-pass section per channel. The first sample after construction or
// reset() primes every section to that sample's steady state, so a session
// starting at rest level sees no start-up transient.
class MultiChannelLowpass {
 public:
  MultiChannelLowpass(std::size_t channels, double sample_rate_hz, double cutoff_hz);

  std::vector<double> process(std::span<const double> sample);
  void reset() noexcept { primed_ = false; }

  std::size_t channels() const noexcept { return sections_.size(); }

 private:
  std::vector<Biquad> sections_;
  bool primed_ = false;
};

}  // namespace lambdahand::signal
