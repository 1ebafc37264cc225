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

#include "evcap/analytic/inconvenience.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "evcap/errors.hpp"

namespace evcap::analytic {
namespace {

template <typename E = InvalidParameter>
void require(bool ok, const char* what) {
  if (!ok) throw E(what);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void ChargingEnvironment::validate() const {
  require(std::isfinite(rho) && rho > 0.0, "station density rho must be > 0");
  require(std::isfinite(power) && power > 0.0, "charger power must be > 0");
  require(std::isfinite(xi) && xi >= 0.0, "utilization xi must be >= 0");
  if (xi >= 1.0) {
    throw OversubscribedInfrastructure("utilization xi = " + fmt(xi) +
                                       " violates the bound xi < 1");
  }
}

void DriverProfile::validate() const {
  require(std::isfinite(distance) && distance >= 0.0, "distance must be >= 0");
  require(std::isfinite(eta) && eta > 0.0, "consumption eta must be > 0");
  require(std::isfinite(sigma) && sigma > 0.0 && sigma <= 1.0, "charge fraction sigma must be in (0, 1]");
  require(std::isfinite(speed) && speed > 0.0, "detour speed must be > 0");
}

void Horizon::validate() const {
  require(std::isfinite(hours) && hours > 0.0, "horizon must be > 0 hours");
}

double utilization(std::size_t n_ev, std::size_t n_cs, const DriverProfile& profile, double power,
                   Horizon horizon) {
  require(n_cs >= 1, "number of charging stations must be >= 1");
  require(std::isfinite(power) && power > 0.0, "charger power must be > 0");
  require(std::isfinite(profile.distance) && profile.distance >= 0.0, "distance must be >= 0");
  require(std::isfinite(profile.eta) && profile.eta > 0.0, "consumption eta must be > 0");
  horizon.validate();
  const double demand = static_cast<double>(n_ev) * profile.distance * profile.eta;
  const double supply = static_cast<double>(n_cs) * horizon.hours * power;
  const double xi = demand / supply;
  if (xi >= 1.0) {
    throw OversubscribedInfrastructure("utilization " + fmt(xi) +
                                       " >= 1: charging demand exceeds station capacity");
  }
  return xi;
}

double expected_detour_distance(const ChargingEnvironment& env) {
  env.validate();
  return 1.0 / ((1.0 - env.xi) * 2.0 * std::sqrt(env.rho));
}

double total_detour_distance(double battery_kwh, const DriverProfile& profile,
                             const ChargingEnvironment& env) {
  profile.validate();
  require(std::isfinite(battery_kwh) && battery_kwh > 0.0, "battery capacity must be > 0");
  const double d_sk = expected_detour_distance(env);
  if (profile.distance == 0.0) return 0.0;
  const double denom = profile.sigma * battery_kwh - profile.eta * d_sk;
  if (!(denom > 0.0)) {
    throw InfeasibleBattery("battery of " + fmt(battery_kwh) +
                            " kWh cannot reach a station on average (sigma*B <= eta*d_sk)");
  }
  return profile.eta * profile.distance * d_sk / denom;
}

double charging_event_count(double battery_kwh, const DriverProfile& profile, double detour_km) {
  require(std::isfinite(battery_kwh) && battery_kwh > 0.0, "battery capacity must be > 0");
  profile.validate();
  require(detour_km >= 0.0, "detour distance must be >= 0");
  return profile.eta * (profile.distance + detour_km) / (profile.sigma * battery_kwh);
}

InconvenienceBreakdown inconvenience_components(double battery_kwh, const DriverProfile& profile,
                                                const ChargingEnvironment& env) {
  InconvenienceBreakdown out;
  out.d_sk = expected_detour_distance(env);
  out.d_s = total_detour_distance(battery_kwh, profile, env);
  out.n_c = charging_event_count(battery_kwh, profile, out.d_s);
  out.tau_po = profile.eta * profile.distance / env.power;
  out.tau_ps = profile.eta * out.d_s / env.power;
  out.tau_s = out.d_s / profile.speed;
  out.tau_e = out.tau_po + out.tau_ps + out.tau_s;
  return out;
}

double inconvenience_closed_form(double battery_kwh, const DriverProfile& profile,
                                 const ChargingEnvironment& env) {
  profile.validate();
  env.validate();
  require(std::isfinite(battery_kwh) && battery_kwh > 0.0, "battery capacity must be > 0");
  if (profile.distance == 0.0) return 0.0;
  const double reach = battery_kwh * std::sqrt(env.rho) * profile.sigma * (1.0 - env.xi);
  const double denom = env.power * profile.speed * (reach - 0.5 * profile.eta);
  if (!(reach - 0.5 * profile.eta > 0.0)) {
    throw InfeasibleBattery("battery of " + fmt(battery_kwh) +
                            " kWh is outside the validity domain (B*sqrt(rho)*sigma*(1-xi) <= eta/2)");
  }
  return profile.distance * profile.eta * (0.5 * env.power + profile.speed * reach) / denom;
}

}  // namespace evcap::analytic
