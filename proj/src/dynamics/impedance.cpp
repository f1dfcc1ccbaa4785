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

#include "lambdahand/impedance.hpp"

#include <cmath>

#include <fmt/format.h>

#include "lambdahand/errors.hpp"

namespace lambdahand {

namespace {

void require(bool ok, const char* what, const ImpedanceParams& p) {
  if (!ok) {
    throw InvalidParameter(fmt::format("impedance params '{}': {}", p.name, what));
  }
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError(fmt::format("contraction level {} outside [0, 1]", alpha));
  }
}

}  // namespace

void ImpedanceParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  require(finite(inertia) && finite(b1) && finite(b2) && finite(b3) && finite(k1) &&
              finite(k2) && finite(k3) && finite(tau_max_flex) && finite(tau_max_ext),
          "all fields must be finite", *this);
  require(inertia > 0.0, "inertia must be positive", *this);
  require(b1 >= 0.0 && b3 >= 0.0, "viscosity coefficients b1, b3 must be nonnegative", *this);
  require(k1 >= 0.0, "stiffness coefficient k1 must be nonnegative", *this);
  require(k3 > 0.0, "stiffness offset k3 must be positive", *this);
  require(b2 > 0.0 && k2 > 0.0, "exponents b2, k2 must be positive", *this);
  require(tau_max_flex > 0.0 && tau_max_ext > 0.0, "maximum torques must be positive", *this);
}

ImpedanceParams ImpedanceParams::wrist() {
  return {.name = "wrist",
          .inertia = 0.004,
          .b1 = 0.14,
          .b2 = 0.2,
          .b3 = 0.144,
          .k1 = 32.8,
          .k2 = 0.6,
          .k3 = 3.2,
          .tau_max_flex = 46.12,
          .tau_max_ext = 44.25};
}

ImpedanceParams ImpedanceParams::finger() {
  return {.name = "finger",
          .inertia = 0.001,
          .b1 = 0.08,
          .b2 = 0.2,
          .b3 = 0.090,
          .k1 = 0.90,
          .k2 = 0.6,
          .k3 = 0.3,
          .tau_max_flex = 0.8,
          .tau_max_ext = 0.8};
}

double stiffness(const ImpedanceParams& params, double alpha) {
  check_alpha(alpha);
  return params.k1 * std::pow(alpha, params.k2) + params.k3;
}

double viscosity(const ImpedanceParams& params, double alpha) {
  check_alpha(alpha);
  return params.b1 * std::pow(alpha, params.b2) + params.b3;
}

double equilibrium_angle(const ImpedanceParams& params, double alpha, double tau_flex,
                         double tau_ext, double theta0) {
  const double k = stiffness(params, alpha);
  if (!(k > 0.0)) {
    throw InvalidParameter(fmt::format("stiffness {} at alpha {} is not positive", k, alpha));
  }
  return (tau_flex - tau_ext) / k + theta0;
}

}  // namespace lambdahand
