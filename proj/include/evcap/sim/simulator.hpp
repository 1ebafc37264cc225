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

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "evcap/sim/demand.hpp"
#include "evcap/sim/network.hpp"
#include "evcap/sim/stations.hpp"

namespace evcap::sim {

// How each EV's state of charge is set at t = 0.
//   full       - battery_kwh
//   fixed      - initial_soc_pct of battery_kwh
//   stationary - a point of a charging cycle: uniform between the agent's
//                first threshold C_s and a target draw C_d, stratified
//                across the fleet
enum class InitialSoc { full, fixed, stationary };

InitialSoc parse_initial_soc(std::string_view name);
std::string_view to_string(InitialSoc policy);

struct SimConfig {
  std::uint64_t seed = 0;
  double horizon_days = 7.0;
  bool charging_enabled = true;  // false: baseline run, SoC is never depleted

  double redirect_probability = 0.7;
  double threshold_shape = 4.0;  // C_s ~ Gamma(shape, scale), percent
  double threshold_scale = 5.0;
  double threshold_min_pct = 1.0;
  double threshold_max_pct = 95.0;
  double target_shape = 85.0;  // C_d ~ Gamma(shape, scale), percent, capped at 100
  double target_scale = 1.0;
  double defer_step_pct = 5.0;
  double defer_floor_pct = 2.0;

  // Overrides for scripted runs.
  std::optional<double> fixed_threshold_pct;
  std::optional<double> fixed_target_pct;

  InitialSoc initial_soc = InitialSoc::stationary;
  double initial_soc_pct = 100.0;  // used by InitialSoc::fixed

  double horizon_hours() const { return horizon_days * 24.0; }
  void validate() const;
};

struct EvAgent {
  std::int64_t id = 0;
  double battery_kwh = 0.0;
  double eta_kwh_per_km = 0.0;
  double soc_kwh = 0.0;  // at t = 0
  std::optional<double> first_threshold_pct;  // drawn from the agent stream when empty
  AgentSchedule schedule;

  void validate(const RoadNetwork& net) const;
};

// Wraps schedules into agents of a common battery size, setting the initial
// SoC according to `config.initial_soc`. Uses seed-derived streams that do
// not depend on battery_kwh, so sweeps over B share their random draws.
std::vector<EvAgent> make_agents(const std::vector<AgentSchedule>& schedules, double battery_kwh,
                                 double eta_kwh_per_km, const SimConfig& config);

struct EvMetrics {
  std::int64_t id = 0;
  double battery_kwh = 0.0;
  double tau_search_h = 0.0;
  double tau_charge_h = 0.0;
  double tau_e_h = 0.0;  // tau_search_h + tau_charge_h
  double distance_km = 0.0;
  double drive_time_h = 0.0;
  double detour_km = 0.0;
  int charge_events = 0;
  int failed_attempts = 0;
  int deferrals = 0;
  int strandings = 0;
  int trips_completed = 0;
  double energy_consumed_kwh = 0.0;
  double energy_charged_kwh = 0.0;
  double soc_start_kwh = 0.0;
  double soc_end_kwh = 0.0;
  double soc_min_kwh = 0.0;
  double soc_max_kwh = 0.0;
};

struct StationMetrics {
  std::int64_t id = 0;
  int plug_ins = 0;
  int rejections = 0;
  int max_occupied = 0;
  double energy_kwh = 0.0;
  double busy_h = 0.0;
};

struct FleetMetrics {
  std::size_t n_ev = 0;
  double mean_tau_e_h = 0.0;
  double mean_tau_search_h = 0.0;
  double mean_tau_charge_h = 0.0;
  double mean_distance_km = 0.0;  // per EV over the horizon
  double mean_detour_km = 0.0;
  double eta_kwh_per_km = 0.0;    // fleet energy / fleet distance
  double speed_kmh = 0.0;         // fleet distance / fleet drive time
  int charge_events = 0;
  int failed_attempts = 0;
  int strandings = 0;
  double energy_consumed_kwh = 0.0;
  double energy_charged_kwh = 0.0;
  double soc_delta_kwh = 0.0;  // sum of (end - start)
};

struct SimMetrics {
  double horizon_h = 0.0;
  std::vector<EvMetrics> per_ev;
  std::vector<StationMetrics> stations;
  FleetMetrics fleet;
};

// Runs the event-driven simulation. Single-threaded and deterministic in
// (inputs, config.seed).
SimMetrics run_simulation(const RoadNetwork& net, const std::vector<ChargingStation>& stations,
                          const std::vector<EvAgent>& agents, const SimConfig& config);

}  // namespace evcap::sim
