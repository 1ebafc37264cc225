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

#include <string>

#include "evcap/cli/commands.hpp"
#include "evcap/errors.hpp"
#include "evcap/sim/demand.hpp"
#include "evcap/sim/network.hpp"
#include "evcap/sim/scenario.hpp"
#include "evcap/sim/simulator.hpp"
#include "evcap/sim/stations.hpp"

namespace evcap::cli {
namespace {

sim::RoadNetwork read_network(Section s) {
  const auto file = s.optional_path("file");
  const bool has_grid = s.has("grid");
  if (file && has_grid) throw ConfigError("give either '" + s.field("file") + "' or '" + s.field("grid") + "'");
  if (file) {
    s.finish();
    return sim::load_network(*file);
  }
  auto g = s.child("grid");
  const auto blocks = g.count("blocks_per_side", 10);
  const double area = g.number("area_km2", 400.0);
  const double speed = g.number("speed_kmh", 50.0);
  g.finish();
  s.finish();
  return sim::generate_grid_network(blocks, area, speed);
}

void read_demand(Section s, sim::DemandProfile& d) {
  d.morning_depart_h = s.number("morning_depart_h", d.morning_depart_h);
  d.evening_depart_h = s.number("evening_depart_h", d.evening_depart_h);
  d.depart_jitter_h = s.number("depart_jitter_h", d.depart_jitter_h);
  d.errand_rate_per_day = s.number("errand_rate_per_day", d.errand_rate_per_day);
  d.errand_radius_km = s.number("errand_radius_km", d.errand_radius_km);
  d.commute_radius_km = s.number("commute_radius_km", d.commute_radius_km);
  s.finish();
}

void read_charging(Section s, sim::SimConfig& c) {
  c.redirect_probability = s.number("redirect_probability", c.redirect_probability);
  c.threshold_shape = s.number("threshold_shape", c.threshold_shape);
  c.threshold_scale = s.number("threshold_scale", c.threshold_scale);
  c.threshold_min_pct = s.number("threshold_min_pct", c.threshold_min_pct);
  c.threshold_max_pct = s.number("threshold_max_pct", c.threshold_max_pct);
  c.target_shape = s.number("target_shape", c.target_shape);
  c.target_scale = s.number("target_scale", c.target_scale);
  c.defer_step_pct = s.number("defer_step_pct", c.defer_step_pct);
  c.defer_floor_pct = s.number("defer_floor_pct", c.defer_floor_pct);
  c.initial_soc = sim::parse_initial_soc(s.string("initial_soc", sim::to_string(c.initial_soc)));
  c.initial_soc_pct = s.number("initial_soc_pct", c.initial_soc_pct);
  s.finish();
}

std::vector<Cell> row_key(const sim::SweepTable& t, const sim::SweepRow& r) {
  return {t.name, r.x_value, r.seed};
}

template <typename... T>
std::vector<Cell> with_key(const sim::SweepTable& t, const sim::SweepRow& r, T&&... rest) {
  auto row = row_key(t, r);
  (row.push_back(Cell(std::forward<T>(rest))), ...);
  return row;
}

std::uint64_t u64(std::size_t v) { return static_cast<std::uint64_t>(v); }
std::int64_t i64(int v) { return static_cast<std::int64_t>(v); }

}  // namespace

CommandResult cmd_simulate(Section& block, std::uint64_t seed) {
  const auto net = read_network(block.child("network"));

  sim::ScenarioConfig sc;
  sc.kind = sim::parse_scenario_kind(block.string("scenario", "capacity_sweep"));
  const auto replicates = block.count("replicates", 1);
  if (replicates < 1) throw ConfigError("'" + block.field("replicates") + "' must be >= 1");
  sc.seeds.clear();
  for (std::size_t k = 0; k < replicates; ++k) sc.seeds.push_back(seed + k);

  sc.eta_kwh_per_km = block.number("eta", sc.eta_kwh_per_km);
  sc.sigma = block.number("sigma", sc.sigma);
  sc.sim.horizon_days = block.number("horizon_days", sc.sim.horizon_days);
  sc.target_daily_km = block.optional_number("target_daily_km");
  read_demand(block.child("demand"), sc.demand);
  read_charging(block.child("charging"), sc.sim);

  auto st = block.child("stations");
  sc.n_stations = st.count("count", sc.n_stations);
  sc.station_power_kw = st.number("power_kw", sc.station_power_kw);
  sc.station_plugs = static_cast<int>(st.integer("plugs", sc.station_plugs));
  st.finish();

  sc.capacities = block.numbers("capacities", sc.capacities);
  sc.station_counts = block.counts("station_counts", sc.station_counts);
  sc.battery_kwh = block.number("battery_kwh", sc.battery_kwh);

  if (const auto file = block.optional_path("stations_file")) {
    if (sc.kind != sim::ScenarioKind::capacity_sweep) {
      throw ConfigError("'" + block.field("stations_file") + "' is only used by the capacity_sweep scenario");
    }
    sc.stations = sim::load_stations(*file, net);
  }
  if (const auto file = block.optional_path("trips_file")) {
    if (block.has("n_ev")) throw ConfigError("give either '" + block.field("n_ev") + "' or '" + block.field("trips_file") + "'");
    if (sc.target_daily_km) {
      throw ConfigError("'" + block.field("target_daily_km") + "' cannot calibrate a trips file");
    }
    sc.schedules = sim::load_trips(*file, net);
    sc.n_ev = sc.schedules.size();
  } else {
    sc.n_ev = block.count("n_ev", sc.n_ev);
  }
  block.finish();

  const auto result = sim::run_scenario(net, sc);

  CommandResult out;
  for (const auto& t : result.tables) {
    Table sweep{t.name, {"x_value", "mean_tau_e_h", "analytic_tau_e_h", "n_ev", "seed"}, {}};
    for (const auto& r : t.rows) sweep.add({r.x_value, r.mean_tau_e_h, r.analytic_tau_e_h, u64(r.n_ev), r.seed});
    out.tables.push_back(std::move(sweep));
  }

  Table fleet{"fleet_summary",
              {"table", "x_value", "seed", "n_ev", "mean_tau_e_h", "mean_tau_search_h", "mean_tau_charge_h",
               "mean_distance_km", "mean_detour_km", "charge_events", "failed_attempts", "strandings",
               "energy_consumed_kwh", "energy_charged_kwh", "soc_delta_kwh", "eta_kwh_per_km", "speed_kmh",
               "baseline_eta_kwh_per_km", "baseline_speed_kmh", "baseline_distance_km", "rho_per_km2", "xi",
               "analytic_tau_e_h"},
              {}};
  Table per_ev{"per_ev_metrics",
               {"table", "x_value", "seed", "ev_id", "battery_kwh", "tau_search_h", "tau_charge_h", "tau_e_h",
                "distance_km", "drive_time_h", "detour_km", "charge_events", "failed_attempts", "deferrals",
                "strandings", "trips_completed", "energy_consumed_kwh", "energy_charged_kwh", "soc_start_kwh",
                "soc_end_kwh"},
               {}};
  Table stations{"station_metrics",
                 {"table", "x_value", "seed", "station_id", "plug_ins", "rejections", "max_occupied",
                  "energy_kwh", "busy_h"},
                 {}};
  for (const auto& t : result.tables) {
    for (const auto& r : t.rows) {
      const auto& f = r.metrics.fleet;
      fleet.add(with_key(t, r, u64(f.n_ev), f.mean_tau_e_h, f.mean_tau_search_h, f.mean_tau_charge_h,
                         f.mean_distance_km, f.mean_detour_km, i64(f.charge_events), i64(f.failed_attempts),
                         i64(f.strandings), f.energy_consumed_kwh, f.energy_charged_kwh, f.soc_delta_kwh,
                         f.eta_kwh_per_km, f.speed_kmh, r.inputs.eta, r.inputs.speed, r.inputs.distance,
                         r.inputs.rho, r.inputs.xi, r.analytic_tau_e_h));
      for (const auto& e : r.metrics.per_ev) {
        per_ev.add(with_key(t, r, e.id, e.battery_kwh, e.tau_search_h, e.tau_charge_h, e.tau_e_h, e.distance_km,
                            e.drive_time_h, e.detour_km, i64(e.charge_events), i64(e.failed_attempts),
                            i64(e.deferrals), i64(e.strandings), i64(e.trips_completed), e.energy_consumed_kwh,
                            e.energy_charged_kwh, e.soc_start_kwh, e.soc_end_kwh));
      }
      for (const auto& s : r.metrics.stations) {
        stations.add(with_key(t, r, s.id, i64(s.plug_ins), i64(s.rejections), i64(s.max_occupied),
                              s.energy_kwh, s.busy_h));
      }
    }
  }
  out.tables.push_back(std::move(fleet));
  out.tables.push_back(std::move(per_ev));
  out.tables.push_back(std::move(stations));

  if (!result.calibration.empty()) {
    Table cal{"calibration",
              {"seed", "errand_rate_per_day", "commute_radius_km", "mean_daily_km", "iterations"},
              {}};
    for (std::size_t k = 0; k < result.calibration.size(); ++k) {
      const auto& c = result.calibration[k];
      cal.add({sc.seeds[k], c.profile.errand_rate_per_day, c.profile.commute_radius_km, c.mean_daily_km,
               i64(c.iterations)});
    }
    out.tables.push_back(std::move(cal));
  }
  return out;
}

}  // namespace evcap::cli
