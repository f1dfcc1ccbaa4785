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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lambdahand/baselines/baselines.hpp"
#include "lambdahand/controller.hpp"
#include "lambdahand/errors.hpp"

using namespace lambdahand;
using namespace lambdahand::baselines;

namespace {

JointState run_baseline(JointState j, const MuscleActivation& act, const ImpedanceParams& p,
                        double seconds) {
  const auto n = static_cast<int>(std::lround(seconds / kControlTick));
  for (int i = 0; i < n; ++i) j = impedance_baseline_step(j, act, p, kControlTick);
  return j;
}

}  // namespace

TEST_CASE("impedance baseline relaxes to the origin") {
  for (const auto& p : {ImpedanceParams::wrist(), ImpedanceParams::finger()}) {
    CAPTURE(p.name);
    const JointState j = run_baseline({0.5, 0.0, 0.0}, {}, p, 10.0);
    CHECK(std::abs(j.theta) < 1e-3);
  }
}

TEST_CASE("balanced baseline torques leave the origin spring in charge") {
  const ImpedanceParams p = ImpedanceParams::wrist();
  MuscleActivation act{0.4 * p.tau_max_ext / p.tau_max_flex, 0.4, Direction::Extension};
  CHECK(p.tau_max_flex * act.alpha_flex == doctest::Approx(p.tau_max_ext * act.alpha_ext));
  const JointState j = run_baseline({0.3, 0.0, 0.0}, act, p, 10.0);
  CHECK(std::abs(j.theta) < 1e-6);
}

TEST_CASE("baseline steady state under constant flexion") {
  for (const auto& p : {ImpedanceParams::wrist(), ImpedanceParams::finger()}) {
    CAPTURE(p.name);
    const MuscleActivation act{0.5, 0.0, Direction::Flexion};
    const JointState j = run_baseline({}, act, p, 10.0);
    const double k = p.k1 * std::pow(0.5, p.k2) + p.k3;
    const double expected = p.tau_max_flex * 0.5 / k;
    CHECK(std::abs(j.theta - expected) < 1e-6);
    CHECK(std::abs(-j.theta - (-(p.tau_max_flex * 0.5) / k)) < 1e-6);
  }
}

TEST_CASE("baseline matches the proposed controller while the gate stays open") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> inc(1e-5, 2e-3);
  for (const auto& p : {ImpedanceParams::wrist(), ImpedanceParams::finger()}) {
    for (Direction dir : {Direction::Flexion, Direction::Extension}) {
      CAPTURE(p.name);
      CAPTURE(to_string(dir));
      JointController ctrl(p);
      JointState base;
      double a = 0.0;
      for (int i = 0; i < 400; ++i) {
        const MuscleActivation act = dir == Direction::Flexion
                                         ? MuscleActivation{a, 0.0, dir}
                                         : MuscleActivation{0.0, a, dir};
        const TickOutput out = ctrl.tick(act);
        base = impedance_baseline_step(base, act, p, kControlTick);
        REQUIRE(ctrl.joint().theta == base.theta);
        REQUIRE(ctrl.joint().theta_dot == base.theta_dot);
        if (i > 0) REQUIRE(out.gate.c_plus == 1);
        a = std::min(a + inc(rng), 0.9);
      }
      CHECK(std::abs(base.theta) > 0.1);
    }
  }
}

TEST_CASE("baseline rejects bad ticks") {
  const ImpedanceParams p = ImpedanceParams::wrist();
  CHECK_THROWS_AS(impedance_baseline_step({}, {}, p, 0.0), DomainError);
  CHECK_THROWS_AS(impedance_baseline_step({}, {std::nan(""), 0.0, Direction::Flexion}, p, 0.005),
                  DomainError);
}

TEST_CASE("proportional examples") {
  const ProportionalConfig cfg;
  CHECK(proportional_step({}, cfg) == 0.0);
  CHECK(proportional_step({0.0, 0.0, Direction::Flexion}, cfg) == 0.0);
  CHECK(proportional_step({0.9, 0.0, Direction::Flexion}, cfg) == -std::numbers::pi / 2.0);
  CHECK(proportional_step({0.0, 0.9, Direction::Extension}, cfg) ==
        7.0 * std::numbers::pi / 18.0);
  CHECK(proportional_step({0.15, 0.0, Direction::Flexion}, cfg) ==
        doctest::Approx(-std::numbers::pi / 4.0));
  // Only the classified muscle counts.
  CHECK(proportional_step({0.9, 0.1, Direction::Extension}, cfg) ==
        doctest::Approx(cfg.gain_ext * 0.1));
}

TEST_CASE("proportional output stays within its range") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  std::uniform_real_distribution<double> g(0.0, 20.0);
  for (int i = 0; i < 20000; ++i) {
    ProportionalConfig cfg;
    cfg.gain_flex = g(rng);
    cfg.gain_ext = g(rng);
    const MuscleActivation act{u(rng), u(rng),
                               static_cast<Direction>(static_cast<int>(rng() % 3))};
    const double y = proportional_step(act, cfg);
    CHECK(y >= cfg.min_angle);
    CHECK(y <= cfg.max_angle);
  }
}

TEST_CASE("proportional rate limit") {
  ProportionalConfig cfg;
  cfg.rate_limit = 2.0;
  ProportionalController pc(cfg);
  const MuscleActivation act{0.9, 0.0, Direction::Flexion};
  CHECK(pc.tick(act) == doctest::Approx(-0.01));
  for (int i = 0; i < 200; ++i) pc.tick(act);
  CHECK(pc.angle() == -std::numbers::pi / 2.0);
  pc.reset();
  CHECK(pc.angle() == 0.0);

  ProportionalController free_run;
  CHECK(free_run.tick(act) == -std::numbers::pi / 2.0);

  ProportionalConfig bad;
  bad.min_angle = 1.0;
  CHECK_THROWS_AS(ProportionalController{bad}, InvalidParameter);
  bad = {};
  bad.rate_limit = 0.0;
  CHECK_THROWS_AS(ProportionalController{bad}, InvalidParameter);
}

TEST_CASE("rmse examples") {
  const std::vector<double> a{0.0, 0.0};
  const std::vector<double> b{0.3, 0.4};
  CHECK(rmse(a, a) == 0.0);
  CHECK(rmse(a, b) == doctest::Approx(0.35355339059327373).epsilon(1e-15));
  const std::vector<double> c{0.1, 0.1};
  CHECK(rmse(a, c) == doctest::Approx(0.1));
  CHECK_THROWS_AS(rmse(a, std::vector<double>{1.0}), InputError);
  CHECK_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}), InputError);
}

TEST_CASE("rmse properties and masks") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a(1 + trial % 40), b(a.size());
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng);
    CHECK(rmse(a, b) == rmse(b, a));
    CHECK(rmse(a, b) >= 0.0);
    CHECK(rmse(a, a) == 0.0);
    b[0] = a[0] + 1e-9;
    CHECK(rmse(a, b) > 0.0);
  }
  const std::vector<double> a{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> b{0.0, 0.0, 2.0, 0.0};
  CHECK(rmse(a, b, {true, false, true, false}) == 0.0);
  CHECK(rmse(a, b, {false, true, false, true}) == doctest::Approx(std::sqrt(5.0)));
  CHECK_THROWS_AS(rmse(a, b, {false, false, false, false}), InputError);
  CHECK_THROWS_AS(rmse(a, b, {true}), InputError);
}
