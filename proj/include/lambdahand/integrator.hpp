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

#include <array>
#include <cstddef>

namespace lambdahand {

// One classical fourth-order Runge-Kutta step of y' = f(y), autonomous form.
template <std::size_t N, class Derivative>
std::array<double, N> rk4_step(const std::array<double, N>& y, double h, Derivative&& f) {
  auto axpy = [](const std::array<double, N>& base, double scale,
                 const std::array<double, N>& dir) {
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = base[i] + scale * dir[i];
    return out;
  };
  const std::array<double, N> k1 = f(y);
  const std::array<double, N> k2 = f(axpy(y, 0.5 * h, k1));
  const std::array<double, N> k3 = f(axpy(y, 0.5 * h, k2));
  const std::array<double, N> k4 = f(axpy(y, h, k3));
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

struct JointState {
  double theta = 0.0;      // rad
  double theta_dot = 0.0;  // rad/s
  double time = 0.0;       // s

  friend bool operator==(const JointState&, const JointState&) = default;
};

// Coefficients of I*th'' + B*th' + K*(th - th0) = tau, frozen over one
// control tick.
struct HeldDynamics {
  double inertia = 0.0;
  double viscosity = 0.0;
  double stiffness = 0.0;
  double theta0 = 0.0;
  double net_torque = 0.0;
};

inline constexpr double kControlTick = 0.005;
inline constexpr double kDefaultSubstep = 0.001;

// Advances the joint by dt using ceil(dt / max_substep) equal RK4 substeps.
// Throws DomainError for non-positive dt or substep, IntegrationBlowup if the
// result is not finite.
JointState integrate_joint(const JointState& joint, const HeldDynamics& dyn, double dt,
                           double max_substep = kDefaultSubstep);

}  // namespace lambdahand
