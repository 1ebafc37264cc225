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

#include "evcap/sim/scenario.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "evcap/analytic/inconvenience.hpp"
#include "evcap/errors.hpp"
#include "evcap/util/csv.hpp"
#include "evcap/util/parallel.hpp"

namespace evcap::sim {
namespace {

struct SeedInputs {
  std::vector<AgentSchedule> schedules;
  SimMetrics baseline;
};

struct Cell {
  std::size_t seed_index = 0;
  double x = 0.0;
  double battery_kwh = 0.0;
  Placement placement = Placement::uniform;
  std::size_t n_stations = 0;
  std::size_t table = 0;
};

std::vector<ChargingStation> place(const RoadNetwork& net, const ScenarioConfig& c, Placement p,
                                   std::size_t count, std::uint64_t seed) {
  switch (p) {
    case Placement::uniform: return place_uniform(net, count, c.station_power_kw, c.station_plugs);
    case Placement::concentrated:
      return place_concentrated(net, count, c.station_power_kw, c.station_plugs);
    case Placement::random:
      return place_random_incremental(net, count, seed, c.station_power_kw, c.station_plugs);
  }
  return {};
}

}  // namespace

AnalyticInputs extract_analytic_inputs(const SimMetrics& baseline, const RoadNetwork& net,
                                       const std::vector<ChargingStation>& stations,
                                       std::size_t n_ev, double horizon_h) {
  const auto& f = baseline.fleet;
  if (!(f.mean_distance_km > 0.0) || !(f.energy_consumed_kwh > 0.0)) {
    throw InvalidParameter("baseline run drove no distance: consumption eta is undefined");
  }
  if (stations.empty()) throw InvalidParameter("analytic inputs need at least one station");
  if (!(net.area_km2() > 0.0)) throw InvalidParameter("network area must be > 0");
  double power = 0.0;
  for (const auto& s : stations) power += s.power_kw;
  power /= static_cast<double>(stations.size());

  AnalyticInputs in;
  in.eta = f.eta_kwh_per_km;
  in.speed = f.speed_kmh;
  in.distance = f.mean_distance_km;
  in.rho = static_cast<double>(stations.size()) / net.area_km2();
  analytic::DriverProfile profile;
  profile.distance = in.distance;
  profile.eta = in.eta;
  profile.speed = in.speed;
  in.xi = analytic::utilization(n_ev, stations.size(), profile, power, analytic::Horizon{horizon_h});
  return in;
}

double analytic_overlay(const AnalyticInputs& in, double battery_kwh, double sigma, double power_kw) {
  analytic::DriverProfile profile;
  profile.distance = in.distance;
  profile.eta = in.eta;
  profile.sigma = sigma;
  profile.speed = in.speed;
  analytic::ChargingEnvironment env;
  env.rho = in.rho;
  env.xi = in.xi;
  env.power = power_kw;
  try {
    return analytic::inconvenience_closed_form(battery_kwh, profile, env);
  } catch (const InfeasibleBattery&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  if (name == "capacity_sweep") return ScenarioKind::capacity_sweep;
  if (name == "density_sweep") return ScenarioKind::density_sweep;
  if (name == "placement_compare") return ScenarioKind::placement_compare;
  throw InvalidParameter("unknown scenario '" + std::string(name) +
                         "' (expected capacity_sweep, density_sweep or placement_compare)");
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::capacity_sweep: return "capacity_sweep";
    case ScenarioKind::density_sweep: return "density_sweep";
    case ScenarioKind::placement_compare: return "placement_compare";
  }
  return "?";
}

std::string_view to_string(Placement placement) {
  switch (placement) {
    case Placement::uniform: return "uniform";
    case Placement::concentrated: return "concentrated";
    case Placement::random: return "random";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  if (seeds.empty()) throw InvalidParameter("scenario needs at least one seed");
  if (n_ev < 1 && schedules.empty()) throw InvalidParameter("scenario needs at least one EV");
  if (!(eta_kwh_per_km > 0.0)) throw InvalidParameter("eta must be > 0");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw InvalidParameter("sigma must lie in (0, 1]");
  if (!(station_power_kw > 0.0)) throw InvalidParameter("station power must be > 0");
  if (station_plugs < 1) throw InvalidParameter("stations need at least one plug");
  if (target_daily_km && !(*target_daily_km > 0.0)) throw InvalidParameter("target_daily_km must be > 0");
  demand.validate();
  sim.validate();
  switch (kind) {
    case ScenarioKind::capacity_sweep:
      if (capacities.empty()) throw InvalidParameter("capacity_sweep needs capacities");
      for (double b : capacities) {
        if (!(b > 0.0)) throw InvalidParameter("capacities must be > 0");
      }
      if (stations.empty() && n_stations < 1) throw InvalidParameter("capacity_sweep needs stations");
      break;
    case ScenarioKind::density_sweep:
      if (station_counts.empty()) throw InvalidParameter("density_sweep needs station_counts");
      for (auto n : station_counts) {
        if (n < 1) throw InvalidParameter("station_counts must be >= 1");
      }
      [[fallthrough]];
    case ScenarioKind::placement_compare:
      if (!(battery_kwh > 0.0)) throw InvalidParameter("battery_kwh must be > 0");
      if (kind == ScenarioKind::placement_compare && n_stations < 1) {
        throw InvalidParameter("placement_compare needs stations");
      }
      break;
  }
}

ScenarioResult run_scenario(const RoadNetwork& net, const ScenarioConfig& config) {
  config.validate();
  ScenarioResult result;
  result.kind = config.kind;

  const double days = config.sim.horizon_days;
  const std::size_t n_seeds = config.seeds.size();
  std::vector<SeedInputs> per_seed(n_seeds);
  for (std::size_t k = 0; k < n_seeds; ++k) {
    const auto seed = config.seeds[k];
    auto& s = per_seed[k];
    if (!config.schedules.empty()) {
      s.schedules = config.schedules;
    } else {
      DemandProfile profile = config.demand;
      profile.days = static_cast<int>(std::ceil(days));
      if (config.target_daily_km) {
        auto cal = calibrate_demand(net, profile, config.n_ev, *config.target_daily_km, seed);
        profile = cal.profile;
        result.calibration.push_back(cal);
      }
      s.schedules = generate_demand(net, config.n_ev, profile, seed);
    }
    SimConfig base = config.sim;
    base.seed = seed;
    base.charging_enabled = false;
    s.baseline = run_simulation(net, {}, make_agents(s.schedules, 1.0, config.eta_kwh_per_km, base), base);
  }

  std::vector<Cell> cells;
  switch (config.kind) {
    case ScenarioKind::capacity_sweep:
      result.tables.push_back({"capacity_sweep", "battery_kwh", {}});
      for (std::size_t k = 0; k < n_seeds; ++k) {
        for (double b : config.capacities) cells.push_back({k, b, b, Placement::uniform, config.n_stations, 0});
      }
      break;
    case ScenarioKind::density_sweep:
      result.tables.push_back({"density_sweep", "n_stations", {}});
      for (std::size_t k = 0; k < n_seeds; ++k) {
        for (auto n : config.station_counts) {
          cells.push_back({k, static_cast<double>(n), config.battery_kwh, Placement::random, n, 0});
        }
      }
      break;
    case ScenarioKind::placement_compare:
      result.tables.push_back({"placement_uniform", "battery_kwh", {}});
      result.tables.push_back({"placement_concentrated", "battery_kwh", {}});
      for (std::size_t k = 0; k < n_seeds; ++k) {
        cells.push_back({k, config.battery_kwh, config.battery_kwh, Placement::uniform, config.n_stations, 0});
        cells.push_back({k, config.battery_kwh, config.battery_kwh, Placement::concentrated, config.n_stations, 1});
      }
      break;
  }

  auto rows = util::parallel_map(
      cells.size(),
      [&](std::size_t c) {
        const Cell& cell = cells[c];
        const auto seed = config.seeds[cell.seed_index];
        const auto& inputs = per_seed[cell.seed_index];
        const auto stations = (config.kind == ScenarioKind::capacity_sweep && !config.stations.empty())
                                  ? config.stations
                                  : place(net, config, cell.placement, cell.n_stations, seed);
        SimConfig sc = config.sim;
        sc.seed = seed;
        const auto agents = make_agents(inputs.schedules, cell.battery_kwh, config.eta_kwh_per_km, sc);
        SweepRow row;
        row.x_value = cell.x;
        row.seed = seed;
        row.n_ev = agents.size();
        row.metrics = run_simulation(net, stations, agents, sc);
        row.mean_tau_e_h = row.metrics.fleet.mean_tau_e_h;
        row.inputs = extract_analytic_inputs(inputs.baseline, net, stations, agents.size(),
                                             row.metrics.horizon_h);
        double power = 0.0;
        for (const auto& s : stations) power += s.power_kw;
        power /= static_cast<double>(stations.size());
        row.analytic_tau_e_h = analytic_overlay(row.inputs, cell.battery_kwh, config.sigma, power);
        return row;
      },
      config.workers);

  for (std::size_t c = 0; c < cells.size(); ++c) {
    result.tables[cells[c].table].rows.push_back(std::move(rows[c]));
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << "x_value,mean_tau_e_h,analytic_tau_e_h,n_ev,seed\n";
  for (const auto& r : table.rows) {
    out << util::format_double(r.x_value) << ',' << util::format_double(r.mean_tau_e_h) << ','
        << util::format_double(r.analytic_tau_e_h) << ',' << r.n_ev << ',' << r.seed << '\n';
  }
}

}  // namespace evcap::sim
