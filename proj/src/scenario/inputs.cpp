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

#include "lambdahand/scenario/inputs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "lambdahand/errors.hpp"

namespace lambdahand::scenario {

namespace {

void check_input_time(double t) {
  if (!(t >= 0.0 && t <= kInputDuration)) {
    throw DomainError(fmt::format("input defined on [0, {}] s, got t = {}", kInputDuration, t));
  }
}

}  // namespace

bool in_any(const std::vector<Window>& windows, double t) noexcept {
  return std::any_of(windows.begin(), windows.end(),
                     [t](const Window& w) { return w.contains(t); });
}

std::pair<double, double> gen_input1(double t) {
  check_input_time(t);
  double af = 0.0;
  double ae = 0.0;
  if (t < 5.0) {
    af = t / 10.0;
  } else if (t >= 20.0) {
    af = (t - 20.0) / 10.0;
  }
  if (t >= 10.0 && t < 15.0) ae = (t - 10.0) / 10.0;
  return {af, ae};
}

std::pair<double, double> gen_input2(double t) {
  check_input_time(t);
  constexpr double pi = std::numbers::pi;
  const double af = 0.5 * std::sin(0.2 * pi * t - pi / 2.0) + 0.5;
  const double ae = t < 5.0 ? 0.0 : 0.5 * std::sin(0.2 * pi * t - 1.5 * pi) + 0.5;
  return {af, ae};
}

std::vector<Window> input1_relaxation_windows() { return {{5.0, 10.0}, {15.0, 20.0}}; }

std::vector<Window> input2_relaxation_windows() {
  std::vector<Window> out;
  for (double peak = 5.0; peak < kInputDuration; peak += 5.0) out.push_back({peak, peak + 2.5});
  return out;
}

double smoothstep(double x) noexcept {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

double TaskProfile::target(double t) const noexcept {
  if (segments.empty()) return 0.0;
  const TaskSegment* seg = &segments.back();
  for (const auto& s : segments) {
    if (t < s.end) {
      seg = &s;
      break;
    }
  }
  if (t <= seg->start) return seg->from;
  if (seg->kind != SegmentKind::Move) return seg->to;
  const double span = std::min(move_time, seg->end - seg->start);
  return seg->from + (seg->to - seg->from) * smoothstep((t - seg->start) / span);
}

std::vector<double> TaskProfile::target_series(double tick) const {
  if (!(tick > 0.0)) throw DomainError("target series needs tick > 0");
  const auto n = static_cast<std::size_t>(std::llround(duration() / tick));
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i] = target(static_cast<double>(i) * tick);
  return out;
}

std::vector<Window> TaskProfile::relaxation_windows() const {
  std::vector<Window> out;
  for (const auto& s : segments) {
    if (s.kind == SegmentKind::Hold) out.push_back({s.start, s.end});
  }
  return out;
}

std::vector<Window> TaskProfile::active_windows() const {
  std::vector<Window> out;
  for (const auto& s : segments) {
    if (s.kind == SegmentKind::Move) out.push_back({s.start, s.end});
  }
  return out;
}

TaskProfile gen_task_profile(int task) {
  constexpr double pi = std::numbers::pi;
  TaskProfile p;
  p.task = task;
  using K = SegmentKind;
  using D = Direction;
  switch (task) {
    case 1:
      p.segments = {{K::Rest, D::NoMotion, 0.0, 5.0, 0.0, 0.0},
                    {K::Move, D::Flexion, 5.0, 10.0, 0.0, -pi / 3.0},
                    {K::Hold, D::NoMotion, 10.0, 15.0, -pi / 3.0, -pi / 3.0}};
      break;
    case 2:
      p.segments = {{K::Rest, D::NoMotion, 0.0, 3.0, 0.0, 0.0},
                    {K::Move, D::Flexion, 3.0, 7.0, 0.0, -pi / 4.0},
                    {K::Hold, D::NoMotion, 7.0, 11.0, -pi / 4.0, -pi / 4.0},
                    {K::Move, D::Extension, 11.0, 15.0, -pi / 4.0, 7.0 * pi / 18.0},
                    {K::Hold, D::NoMotion, 15.0, 19.0, 7.0 * pi / 18.0, 7.0 * pi / 18.0}};
      break;
    default:
      throw InputError(fmt::format("unknown task {} (expected 1 or 2)", task));
  }
  return p;
}

}  // namespace lambdahand::scenario
