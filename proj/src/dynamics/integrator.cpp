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

#include "lambdahand/integrator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "lambdahand/errors.hpp"

namespace lambdahand {

JointState integrate_joint(const JointState& joint, const HeldDynamics& dyn, double dt,
                           double max_substep) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError(fmt::format("integration step {} must be positive and finite", dt));
  }
  if (!(max_substep > 0.0)) {
    throw DomainError(fmt::format("substep {} must be positive", max_substep));
  }
  // Tolerate dt being a hair above an integer multiple of the substep.
  const auto substeps =
      static_cast<long>(std::max(1.0, std::ceil(dt / max_substep - 1e-9)));
  const double h = dt / static_cast<double>(substeps);

  auto rhs = [&dyn](const std::array<double, 2>& y) {
    const double accel = (dyn.net_torque - dyn.viscosity * y[1] -
                          dyn.stiffness * (y[0] - dyn.theta0)) /
                         dyn.inertia;
    return std::array<double, 2>{y[1], accel};
  };

  std::array<double, 2> y{joint.theta, joint.theta_dot};
  for (long i = 0; i < substeps; ++i) {
    y = rk4_step(y, h, rhs);
  }
  if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
    throw IntegrationBlowup(
        fmt::format("joint state diverged at t={} (theta={}, theta_dot={})",
                    joint.time + dt, y[0], y[1]));
  }
  return {y[0], y[1], joint.time + dt};
}

}  // namespace lambdahand
