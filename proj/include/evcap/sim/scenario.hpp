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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evcap/sim/demand.hpp"
#include "evcap/sim/network.hpp"
#include "evcap/sim/simulator.hpp"
#include "evcap/sim/stations.hpp"

namespace evcap::sim {

// Inputs of the analytic model as measured on a run with charging disabled.
struct AnalyticInputs {
  double eta = 0.0;       // kWh/km
  double speed = 0.0;     // km/h
  double distance = 0.0;  // km per EV over the horizon
  double rho = 0.0;       // stations per km^2
  double xi = 0.0;
};

// Throws InvalidParameter when the baseline drove no distance (eta is then
// undefined) and OversubscribedInfrastructure when xi >= 1.
AnalyticInputs extract_analytic_inputs(const SimMetrics& baseline, const RoadNetwork& net,
                                       const std::vector<ChargingStation>& stations,
                                       std::size_t n_ev, double horizon_h);

// Analytic tau_e over the simulated horizon for battery `battery_kwh`; NaN
// when the analytic model has no feasible solution there.
double analytic_overlay(const AnalyticInputs& in, double battery_kwh, double sigma, double power_kw);

enum class ScenarioKind { capacity_sweep, density_sweep, placement_compare };

ScenarioKind parse_scenario_kind(std::string_view name);
std::string_view to_string(ScenarioKind kind);

enum class Placement { uniform, concentrated, random };

std::string_view to_string(Placement placement);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::capacity_sweep;
  std::vector<std::uint64_t> seeds{1};
  std::size_t n_ev = 50;
  double eta_kwh_per_km = 0.085;
  double sigma = 0.7;  // charge fraction used by the analytic overlay
  DemandProfile demand;
  std::optional<double> target_daily_km;  // calibrate demand per seed when set
  SimConfig sim;                          // seed is overwritten per run

  double station_power_kw = 20.0;
  int station_plugs = 1;
  std::size_t n_stations = 10;  // capacity_sweep
  std::vector<double> capacities{10.0, 20.0, 40.0, 60.0, 100.0};
  std::vector<std::size_t> station_counts{1, 5, 10, 25, 50};  // density_sweep
  double battery_kwh = 20.0;  // density_sweep and placement_compare

  // Replace the generated placement (capacity_sweep only) and the generated
  // demand. Left empty they are produced from the config.
  std::vector<ChargingStation> stations;
  std::vector<AgentSchedule> schedules;

  unsigned workers = 0;

  void validate() const;
};

struct SweepRow {
  double x_value = 0.0;
  double mean_tau_e_h = 0.0;
  double analytic_tau_e_h = 0.0;
  std::size_t n_ev = 0;
  std::uint64_t seed = 0;
  AnalyticInputs inputs;
  SimMetrics metrics;
};

struct SweepTable {
  std::string name;     // e.g. "capacity_sweep", "placement_uniform"
  std::string x_label;  // "battery_kwh" or "n_stations"
  std::vector<SweepRow> rows;
};

struct ScenarioResult {
  ScenarioKind kind = ScenarioKind::capacity_sweep;
  std::vector<SweepTable> tables;
  std::vector<CalibrationResult> calibration;  // one per seed when calibrating
};

ScenarioResult run_scenario(const RoadNetwork& net, const ScenarioConfig& config);

// Columns x_value,mean_tau_e_h,analytic_tau_e_h,n_ev,seed.
void write_sweep_csv(std::ostream& out, const SweepTable& table);

}  // namespace evcap::sim
