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

#include <utility>
#include <vector>

#include "lambdahand/direction.hpp"

namespace lambdahand::scenario {

// Closed time interval [start, end], seconds.
struct Window {
  double start = 0.0;
  double end = 0.0;

  bool contains(double t) const noexcept { return t >= start && t <= end; }

  friend bool operator==(const Window&, const Window&) = default;
};

bool in_any(const std::vector<Window>& windows, double t) noexcept;

// Artificial contraction levels (alpha_f, alpha_e). Defined for 0 <= t <= 30;
// throw DomainError otherwise.
//   Input 1: flexion ramp, rest, extension ramp, rest, flexion ramp.
//   Input 2: antiphase raised sines, extensor silent before 5 s.
std::pair<double, double> gen_input1(double t);
std::pair<double, double> gen_input2(double t);

inline constexpr double kInputDuration = 30.0;

// Scripted relaxation windows of the two artificial inputs. For Input 2 these
// are the stretches where the classified level falls from its peak.
std::vector<Window> input1_relaxation_windows();
std::vector<Window> input2_relaxation_windows();

// Target-angle protocols in the anatomical frame (extension positive).
enum class SegmentKind { Rest, Move, Hold };

struct TaskSegment {
  SegmentKind kind = SegmentKind::Rest;
  Direction direction = Direction::NoMotion;  // Move segments only
  double start = 0.0;
  double end = 0.0;
  double from = 0.0;  // rad
  double to = 0.0;    // rad
};

struct TaskProfile {
  int task = 0;
  std::vector<TaskSegment> segments;

  double duration() const noexcept { return segments.empty() ? 0.0 : segments.back().end; }

  // Target at t. A Move segment blends from -> to with a smoothstep over its
  // first move_time seconds, then holds `to`. Clamped outside [0, duration].
  double target(double t) const noexcept;

  // Samples target() at i * tick for i = 0 .. round(duration / tick).
  std::vector<double> target_series(double tick) const;

  std::vector<Window> relaxation_windows() const;  // Hold segments
  std::vector<Window> active_windows() const;      // Move segments

  double move_time = 1.0;
};

// Task 1: rest 5 s, flexion to -pi/3 over 5 s, relaxed hold 5 s.
// Task 2: rest 3 s, flexion to -pi/4 (4 s), relaxed hold (4 s), extension to
// 7 pi/18 (4 s), relaxed hold (4 s).
// Throws InputError for other ids.
TaskProfile gen_task_profile(int task);

// 3 t^2 - 2 t^3 on [0, 1], clamped outside.
double smoothstep(double x) noexcept;

}  // namespace lambdahand::scenario
