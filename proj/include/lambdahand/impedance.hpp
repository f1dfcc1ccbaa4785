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

#include <string>

namespace lambdahand {

// Per-joint impedance constants. Stiffness and viscosity are power laws in
// the muscle contraction level:
//   K(a) = k1 * a^k2 + k3        [N m/rad]
//   B(a) = b1 * a^b2 + b3        [N m s/rad]
struct ImpedanceParams {
  std::string name;
  double inertia = 0.0;  // kg m^2
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double tau_max_flex = 0.0;  // N m
  double tau_max_ext = 0.0;   // N m

  // Throws InvalidParameter when an invariant is violated.
  void validate() const;

  static ImpedanceParams wrist();
  static ImpedanceParams finger();

  friend bool operator==(const ImpedanceParams&, const ImpedanceParams&) = default;
};

// Both throw DomainError for alpha outside [0, 1].
double stiffness(const ImpedanceParams& params, double alpha);
double viscosity(const ImpedanceParams& params, double alpha);

// Angle at which the complete system rests (zero velocity and acceleration):
//   theta_eq = (tau_flex - tau_ext) / K(alpha) + theta0
// Throws InvalidParameter when K(alpha) <= 0.
double equilibrium_angle(const ImpedanceParams& params, double alpha, double tau_flex,
                         double tau_ext, double theta0);

}  // namespace lambdahand
