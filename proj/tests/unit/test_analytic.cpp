// Copyright 2026 The evcap Authors
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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "evcap/analytic/inconvenience.hpp"
#include "evcap/analytic/sensitivity.hpp"
#include "evcap/errors.hpp"
#include "gen.hpp"

namespace evcap::analytic {
namespace {

using evcap::testing::AnalyticCase;
using evcap::testing::Gen;
using evcap::testing::gen_feasible;

DriverProfile scenario1_driver() {
  return DriverProfile{.distance = 1185.0, .eta = 0.085, .sigma = 0.7, .speed = 42.4};
}

ChargingEnvironment scenario1_env() {
  const double xi = utilization(50, 10, scenario1_driver(), 20.0, Horizon{720.0});
  return ChargingEnvironment{.rho = 0.03, .xi = xi, .power = 20.0};
}

// Solves d_s = n_c(d_s) * d_sk by plain iteration from zero.
double detour_by_iteration(const AnalyticCase& c) {
  const double d_sk = 1.0 / ((1.0 - c.env.xi) * 2.0 * std::sqrt(c.env.rho));
  double ds = 0.0;
  for (int i = 0; i < 2000000; ++i) {
    const double next =
        c.driver.eta * (c.driver.distance + ds) / (c.driver.sigma * c.battery_kwh) * d_sk;
    if (std::abs(next - ds) <= 1e-14 * std::max(1.0, next)) return next;
    ds = next;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

TEST(Utilization, ReferenceScenarios) {
  EXPECT_NEAR(utilization(50, 10, scenario1_driver(), 20.0, Horizon{720.0}), 0.0349740, 1e-6);
  const DriverProfile city{.distance = 570.0, .eta = 0.173, .sigma = 0.7, .speed = 32.1};
  EXPECT_NEAR(utilization(500, 50, city, 20.0, Horizon::days(30)), 0.0684792, 1e-6);
  EXPECT_EQ(utilization(0, 3, city, 20.0, Horizon::year()), 0.0);
}

TEST(Utilization, Errors) {
  const DriverProfile d = scenario1_driver();
  EXPECT_THROW(utilization(50, 0, d, 20.0, Horizon{720.0}), InvalidParameter);
  EXPECT_THROW(utilization(50, 10, d, 0.0, Horizon{720.0}), InvalidParameter);
  EXPECT_THROW(utilization(50, 10, d, 20.0, Horizon{0.0}), InvalidParameter);
  // 50 * 1185 * 0.085 kWh against 1 station for 1 h.
  EXPECT_THROW(utilization(50, 1, d, 20.0, Horizon{1.0}), OversubscribedInfrastructure);
}

TEST(Inconvenience, Scenario1Point) {
  const auto b = inconvenience_components(40.0, scenario1_driver(), scenario1_env());
  EXPECT_NEAR(b.d_sk, 2.99137, 1e-5);
  EXPECT_NEAR(b.d_s, 10.8595, 1e-4);
  EXPECT_NEAR(b.tau_po, 1185.0 * 0.085 / 20.0, 1e-12);
  EXPECT_NEAR(b.tau_e, 5.33852, 1e-5);
  EXPECT_NEAR(b.n_c, 0.085 * (1185.0 + b.d_s) / (0.7 * 40.0), 1e-12);
  EXPECT_NEAR(inconvenience_closed_form(40.0, scenario1_driver(), scenario1_env()), b.tau_e, 1e-12);
  EXPECT_NEAR(inconvenience_cost(b.tau_e, kDefaultMu), 16.65 * b.tau_e, 1e-12);
}

TEST(Inconvenience, DetourAndEventCounts) {
  EXPECT_DOUBLE_EQ(expected_detour_distance({.rho = 1.0, .xi = 0.0, .power = 20.0}), 0.5);
  EXPECT_DOUBLE_EQ(expected_detour_distance({.rho = 0.25, .xi = 0.5, .power = 20.0}), 2.0);
  EXPECT_NEAR(expected_detour_distance({.rho = 0.476, .xi = 0.0685, .power = 20.0}), 0.778, 5e-4);
  EXPECT_THROW(expected_detour_distance({.rho = 1.0, .xi = 1.0, .power = 20.0}), InvalidParameter);

  const DriverProfile d = scenario1_driver();
  EXPECT_NEAR(total_detour_distance(40.0, d, scenario1_env()), 10.86, 5e-3);
  EXPECT_NEAR(charging_event_count(40.0, d, 10.86), 3.63, 5e-3);
  // One full useful charge.
  const DriverProfile one{.distance = 0.7 * 40.0 / 0.085, .eta = 0.085, .sigma = 0.7, .speed = 40.0};
  EXPECT_NEAR(charging_event_count(40.0, one, 0.0), 1.0, 1e-12);
  EXPECT_THROW(charging_event_count(0.0, d, 0.0), InvalidParameter);

  const double annual = inconvenience_closed_form(40.0, d, scenario1_env()) * 365.0 / 30.0;
  EXPECT_NEAR(inconvenience_cost(annual, kDefaultMu), 1081.6, 0.5);
  EXPECT_NEAR(inconvenience_closed_form(100.0, d, scenario1_env()), 5.16, 5e-3);
}

TEST(Inconvenience, ZeroDistanceIsZero) {
  DriverProfile d = scenario1_driver();
  d.distance = 0.0;
  EXPECT_EQ(inconvenience_closed_form(0.01, d, scenario1_env()), 0.0);
  const auto b = inconvenience_components(0.01, d, scenario1_env());
  EXPECT_EQ(b.tau_e, 0.0);
  EXPECT_EQ(b.d_s, 0.0);
}

TEST(Inconvenience, Errors) {
  const DriverProfile d = scenario1_driver();
  ChargingEnvironment e = scenario1_env();
  // eta * d_sk / sigma ~= 0.363 kWh for this environment.
  EXPECT_THROW(inconvenience_closed_form(0.3, d, e), InfeasibleBattery);
  EXPECT_THROW(inconvenience_components(0.3, d, e), InfeasibleBattery);
  EXPECT_NO_THROW(inconvenience_closed_form(0.4, d, e));
  EXPECT_THROW(inconvenience_closed_form(0.0, d, e), InvalidParameter);
  EXPECT_THROW(inconvenience_closed_form(-5.0, d, e), InvalidParameter);

  e.xi = 1.0;
  EXPECT_THROW(inconvenience_closed_form(40.0, d, e), OversubscribedInfrastructure);
  e.xi = -0.1;
  EXPECT_THROW(inconvenience_closed_form(40.0, d, e), InvalidParameter);
  e = scenario1_env();
  e.rho = 0.0;
  EXPECT_THROW(inconvenience_closed_form(40.0, d, e), InvalidParameter);

  DriverProfile bad = d;
  bad.sigma = 1.5;
  EXPECT_THROW(inconvenience_closed_form(40.0, bad, scenario1_env()), InvalidParameter);
  bad = d;
  bad.speed = 0.0;
  EXPECT_THROW(inconvenience_closed_form(40.0, bad, scenario1_env()), InvalidParameter);
  bad = d;
  bad.distance = std::nan("");
  EXPECT_THROW(inconvenience_closed_form(40.0, bad, scenario1_env()), InvalidParameter);
}

TEST(Inconvenience, PropertyDetourMatchesFixedPointIteration) {
  Gen g(21);
  for (int trial = 0; trial < 300; ++trial) {
    AnalyticCase c = gen_feasible(g);
    c.battery_kwh *= 1.5;  // keeps the contraction fast enough for plain iteration
    const double expected = detour_by_iteration(c);
    ASSERT_TRUE(std::isfinite(expected));
    ASSERT_NEAR(total_detour_distance(c.battery_kwh, c.driver, c.env), expected,
                1e-9 * std::max(1.0, expected));
  }
}

TEST(Inconvenience, PropertyClosedFormEqualsComponentSum) {
  Gen g(22);
  for (int trial = 0; trial < 2000; ++trial) {
    const AnalyticCase c = gen_feasible(g);
    const auto b = inconvenience_components(c.battery_kwh, c.driver, c.env);
    const double cf = inconvenience_closed_form(c.battery_kwh, c.driver, c.env);
    ASSERT_NEAR(cf, b.tau_po + b.tau_ps + b.tau_s, 1e-9 * cf);
    ASSERT_GE(b.tau_e, b.tau_po);
    ASSERT_GE(b.d_s, 0.0);
  }
}

TEST(Inconvenience, PropertyMonotoneDirections) {
  Gen g(23);
  for (int trial = 0; trial < 500; ++trial) {
    const AnalyticCase c = gen_feasible(g);
    const double base = inconvenience_closed_form(c.battery_kwh, c.driver, c.env);
    auto with = [&](auto mutate) {
      AnalyticCase m = c;
      mutate(m);
      return inconvenience_closed_form(m.battery_kwh, m.driver, m.env);
    };
    const double f = 1.1;
    ASSERT_LT(with([&](AnalyticCase& m) { m.battery_kwh *= f; }), base);
    ASSERT_LT(with([&](AnalyticCase& m) { m.env.rho *= f; }), base);
    ASSERT_LT(with([&](AnalyticCase& m) { m.env.power *= f; }), base);
    ASSERT_LT(with([&](AnalyticCase& m) { m.driver.speed *= f; }), base);
    ASSERT_GT(with([&](AnalyticCase& m) { m.driver.distance *= f; }), base);
    ASSERT_LT(with([&](AnalyticCase& m) { m.driver.eta /= f; }), base);
    ASSERT_LE(with([&](AnalyticCase& m) { m.env.xi = c.env.xi * 0.5; }), base);
    if (c.driver.sigma < 0.9) {
      ASSERT_LT(with([&](AnalyticCase& m) { m.driver.sigma *= f; }), base);
    }
  }
}

TEST(Inconvenience, PropertyConvexInBattery) {
  Gen g(24);
  for (int trial = 0; trial < 300; ++trial) {
    const AnalyticCase c = gen_feasible(g);
    const double h = c.battery_kwh * 0.05;
    const double lo = inconvenience_closed_form(c.battery_kwh, c.driver, c.env);
    const double mid = inconvenience_closed_form(c.battery_kwh + h, c.driver, c.env);
    const double hi = inconvenience_closed_form(c.battery_kwh + 2 * h, c.driver, c.env);
    ASSERT_GE(lo - 2 * mid + hi, -1e-9 * lo);
    // Large batteries approach the pure charging time from above.
    ASSERT_GT(hi, c.driver.eta * c.driver.distance / c.env.power);
  }
}

TEST(Inconvenience, DiminishingReturnsScenario1) {
  const auto d = scenario1_driver();
  const auto e = scenario1_env();
  const double t40 = inconvenience_closed_form(40.0, d, e);
  const double t100 = inconvenience_closed_form(100.0, d, e);
  EXPECT_GT(t40 - t100, 0.0);
  EXPECT_LT(t40 - t100, 0.1 * t40);
}

TEST(Sensitivity, ParseNames) {
  EXPECT_EQ(parse_sweep_parameter("B"), SweepParameter::battery);
  EXPECT_EQ(parse_sweep_parameter("battery"), SweepParameter::battery);
  EXPECT_EQ(parse_sweep_parameter("v"), SweepParameter::speed);
  EXPECT_EQ(parse_sweep_parameter("P"), SweepParameter::power);
  EXPECT_EQ(parse_sweep_parameter("xi"), SweepParameter::xi);
  EXPECT_THROW(parse_sweep_parameter("mu"), InvalidParameter);
  EXPECT_EQ(to_string(SweepParameter::rho), "rho");
}

TEST(Sensitivity, ReferenceTrends) {
  const auto base = reference_constants();
  struct Expect {
    SweepParameter p;
    Trend t;
  };
  const Expect cases[] = {
      {SweepParameter::battery, Trend::decreasing}, {SweepParameter::distance, Trend::increasing},
      {SweepParameter::eta, Trend::increasing},     {SweepParameter::sigma, Trend::decreasing},
      {SweepParameter::speed, Trend::decreasing},   {SweepParameter::rho, Trend::decreasing},
      {SweepParameter::xi, Trend::increasing},      {SweepParameter::power, Trend::decreasing},
  };
  for (const auto& c : cases) {
    const auto [lo, hi] = reference_range(c.p);
    const auto sweep = sensitivity_sweep(base, c.p, lo, hi, 50);
    ASSERT_EQ(sweep.points.size(), 50u);
    EXPECT_DOUBLE_EQ(sweep.points.front().value, lo);
    EXPECT_DOUBLE_EQ(sweep.points.back().value, hi);
    EXPECT_EQ(sweep.trend, c.t) << to_string(c.p);
  }
}

TEST(Sensitivity, InfeasiblePointsFlagged) {
  auto base = reference_constants();
  base.env.rho = 0.0001;  // d_sk = 55.6 km at xi = 0.1
  const auto sweep = sensitivity_sweep(base, SweepParameter::battery, 5.0, 150.0, 30);
  bool saw_infeasible = false;
  for (const auto& p : sweep.points) {
    if (!p.feasible) {
      saw_infeasible = true;
      EXPECT_TRUE(std::isnan(p.tau_e));
      EXPECT_FALSE(p.note.empty());
    }
  }
  EXPECT_TRUE(saw_infeasible);
  EXPECT_EQ(sweep.trend, Trend::decreasing);
}

TEST(Sensitivity, Errors) {
  const auto base = reference_constants();
  EXPECT_THROW(sensitivity_sweep(base, SweepParameter::battery, 5, 150, 0), InvalidParameter);
  EXPECT_THROW(sensitivity_sweep(base, SweepParameter::battery, 150, 5, 10), InvalidParameter);
  const auto one = sensitivity_sweep(base, SweepParameter::battery, 20, 20, 1);
  ASSERT_EQ(one.points.size(), 1u);
  EXPECT_EQ(one.trend, Trend::insufficient);
}

}  // namespace
}  // namespace evcap::analytic
