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

#pragma once

#include <cstddef>

namespace evcap::analytic {

// Charging infrastructure as seen by the analytic model.
struct ChargingEnvironment {
  double rho = 1.0;    // stations per km^2
  double xi = 0.0;     // utilization rate in [0, 1)
  double power = 20.0; // charger output, kW

  // Throws InvalidParameter, or OversubscribedInfrastructure when xi >= 1.
  void validate() const;
};

struct DriverProfile {
  double distance = 0.0;  // planned travel distance over the horizon, km
  double eta = 0.2;       // consumption, kWh/km
  double sigma = 0.7;     // mean fraction of capacity replenished per charge
  double speed = 15.0;    // travel speed while detouring, km/h

  void validate() const;
};

struct Horizon {
  double hours = 8760.0;

  static constexpr Horizon days(double d) { return Horizon{d * 24.0}; }
  static constexpr Horizon year() { return Horizon{8760.0}; }
  void validate() const;
};

// Decomposition of the charging inconvenience over one horizon.
struct InconvenienceBreakdown {
  double tau_po = 0.0;  // charging time for the planned distance, h
  double tau_ps = 0.0;  // charging time for energy spent on detours, h
  double tau_s = 0.0;   // detour travel time, h
  double tau_e = 0.0;   // total, h
  double d_s = 0.0;     // total detour distance, km
  double n_c = 0.0;     // charging events (real-valued)
  double d_sk = 0.0;    // expected detour per event, km
};

// Fleet charging demand over supply: (n_ev * d * eta) / (n_cs * H * P).
// Throws OversubscribedInfrastructure when the ratio reaches 1.
double utilization(std::size_t n_ev, std::size_t n_cs, const DriverProfile& profile, double power,
                   Horizon horizon);

// Expected detour to an available station: nearest-station distance under a
// homogeneous Poisson placement times the expected number of attempts.
double expected_detour_distance(const ChargingEnvironment& env);

// Solution of the fixed point d_s = n_c(d_s) * d_sk. Throws
// InfeasibleBattery when sigma*B <= eta*d_sk.
double total_detour_distance(double battery_kwh, const DriverProfile& profile,
                             const ChargingEnvironment& env);

double charging_event_count(double battery_kwh, const DriverProfile& profile, double detour_km);

InconvenienceBreakdown inconvenience_components(double battery_kwh, const DriverProfile& profile,
                                                const ChargingEnvironment& env);

// Same quantity as inconvenience_components(...).tau_e, evaluated through the
// single rational expression.
double inconvenience_closed_form(double battery_kwh, const DriverProfile& profile,
                                 const ChargingEnvironment& env);

inline double inconvenience_cost(double tau_e_hours, double mu_eur_per_hour) {
  return mu_eur_per_hour * tau_e_hours;
}

// Value of time used for Paris 2022, EUR/h.
inline constexpr double kDefaultMu = 16.65;

}  // namespace evcap::analytic
