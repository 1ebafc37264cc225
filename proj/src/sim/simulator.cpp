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

#include "evcap/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "evcap/errors.hpp"
#include "evcap/sim/routing.hpp"
#include "evcap/util/rng.hpp"

namespace evcap::sim {
namespace {

constexpr std::uint64_t kThresholdStream = 10;
constexpr std::uint64_t kDecisionStream = 11;
constexpr std::uint64_t kInitialStream = 12;
constexpr std::uint64_t kStrataStream = 13;

enum class EventKind { trip_start, edge_done, strand, charge_done };

struct Event {
  double t_h;
  std::uint64_t seq;
  std::size_t agent;
  EventKind kind;

  bool operator>(const Event& o) const {
    if (t_h != o.t_h) return t_h > o.t_h;
    return seq > o.seq;
  }
};

enum class LegKind { none, to_destination, to_station };

struct AgentState {
  const EvAgent* spec = nullptr;
  double soc = 0.0;
  NodeIndex at = 0;
  std::size_t next_trip = 0;
  NodeIndex trip_dest = 0;

  LegKind leg_kind = LegKind::none;
  std::vector<EdgeIndex> leg;
  std::size_t leg_pos = 0;
  NodeIndex leg_target = 0;
  std::size_t station = 0;  // target station while leg_kind == to_station

  double threshold_pct = 0.0;  // last drawn C_s
  double trigger_pct = 0.0;    // C_s, lowered by deferrals
  double target_pct = 100.0;   // last drawn C_d

  bool in_episode = false;
  double episode_start_h = 0.0;
  double direct_time_h = 0.0;
  double direct_km = 0.0;
  double episode_km = 0.0;
  double episode_charge_h = 0.0;
  std::vector<bool> tried;  // busy stations seen since the last (re)trigger
  std::optional<std::size_t> avoid;  // station that just turned us away

  bool charging = false;
  double plug_in_h = 0.0;
  double charge_target_kwh = 0.0;

  std::mt19937_64 threshold_rng;
  std::mt19937_64 decision_rng;
  EvMetrics m;

  double soc_pct() const { return 100.0 * soc / spec->battery_kwh; }
};

double draw_threshold(const SimConfig& c, std::mt19937_64& rng) {
  if (c.fixed_threshold_pct) return *c.fixed_threshold_pct;
  std::gamma_distribution<double> g(c.threshold_shape, c.threshold_scale);
  return std::clamp(g(rng), c.threshold_min_pct, c.threshold_max_pct);
}

double draw_target(const SimConfig& c, std::mt19937_64& rng, double threshold_pct) {
  double t;
  if (c.fixed_target_pct) {
    t = *c.fixed_target_pct;
  } else {
    std::gamma_distribution<double> g(c.target_shape, c.target_scale);
    t = std::min(100.0, g(rng));
  }
  if (t <= threshold_pct) t = std::min(100.0, threshold_pct + 5.0);
  return t;
}

class Simulation {
 public:
  Simulation(const RoadNetwork& net, const std::vector<ChargingStation>& stations,
             const std::vector<EvAgent>& agents, const SimConfig& config)
      : net_(net), stations_(stations), config_(config), router_(net),
        horizon_h_(config.horizon_hours()) {
    station_metrics_.resize(stations_.size());
    waiting_.resize(stations_.size());
    for (std::size_t s = 0; s < stations_.size(); ++s) {
      station_metrics_[s].id = stations_[s].id;
      station_metrics_[s].max_occupied = stations_[s].occupied;
    }
    states_.resize(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) {
      auto& a = states_[i];
      const auto& spec = agents[i];
      a.spec = &spec;
      a.soc = spec.soc_kwh;
      a.threshold_rng = util::stream_rng(config.seed, {static_cast<std::uint64_t>(spec.id), kThresholdStream});
      a.decision_rng = util::stream_rng(config.seed, {static_cast<std::uint64_t>(spec.id), kDecisionStream});
      a.threshold_pct = spec.first_threshold_pct ? *spec.first_threshold_pct
                                                 : draw_threshold(config, a.threshold_rng);
      a.trigger_pct = a.threshold_pct;
      a.tried.assign(stations_.size(), false);
      a.m.id = spec.id;
      a.m.battery_kwh = spec.battery_kwh;
      a.m.soc_start_kwh = a.m.soc_min_kwh = a.m.soc_max_kwh = spec.soc_kwh;
      const auto& trips = spec.schedule.trips;
      a.at = trips.empty() ? spec.schedule.home : trips.front().origin;
      if (!trips.empty()) schedule_trip(i, 0.0);
    }
  }

  SimMetrics run() {
    while (!queue_.empty()) {
      const Event ev = queue_.top();
      if (ev.t_h > horizon_h_) break;
      queue_.pop();
      switch (ev.kind) {
        case EventKind::trip_start: start_trip(ev.agent, ev.t_h); break;
        case EventKind::edge_done: edge_done(ev.agent, ev.t_h); break;
        case EventKind::strand: strand(ev.agent, ev.t_h); break;
        case EventKind::charge_done: charge_done(ev.agent, ev.t_h, true); break;
      }
    }
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i].charging) charge_done(i, horizon_h_, false);
    }
    return collect();
  }

 private:
  void push(double t, std::size_t agent, EventKind kind) { queue_.push({t, seq_++, agent, kind}); }

  void schedule_trip(std::size_t i, double now) {
    auto& a = states_[i];
    const auto& trips = a.spec->schedule.trips;
    if (a.next_trip >= trips.size()) return;
    const double t = std::max(now, trips[a.next_trip].depart_s / 3600.0);
    if (t < horizon_h_) push(t, i, EventKind::trip_start);
  }

  void set_leg(AgentState& a, NodeIndex target, LegKind kind) {
    a.leg = router_.route(a.at, target, Metric::time).edges;
    a.leg_pos = 0;
    a.leg_target = target;
    a.leg_kind = kind;
  }

  void note_soc(AgentState& a) {
    a.m.soc_min_kwh = std::min(a.m.soc_min_kwh, a.soc);
    a.m.soc_max_kwh = std::max(a.m.soc_max_kwh, a.soc);
  }

  void start_trip(std::size_t i, double t) {
    auto& a = states_[i];
    a.trip_dest = a.spec->schedule.trips[a.next_trip++].destination;
    set_leg(a, a.trip_dest, LegKind::to_destination);
    at_node(i, t);
  }

  // Decision point whenever an agent stands on a node.
  void at_node(std::size_t i, double t) {
    auto& a = states_[i];
    if (a.leg_kind == LegKind::to_station && a.at == a.leg_target) {
      arrive_station(i, t);
      return;
    }
    if (a.leg_kind == LegKind::to_destination && a.at == a.trip_dest) {
      finish_trip(i, t);
      return;
    }
    if (config_.charging_enabled && a.leg_kind == LegKind::to_destination &&
        a.soc_pct() < a.trigger_pct && head_to_station(i, t)) {
      return;
    }
    step(i, t);
  }

  // Picks the nearest station not yet tried in this episode. Returns false
  // when none is left.
  bool head_to_station(std::size_t i, double t) {
    auto& a = states_[i];
    const auto& dist = router_.costs_from(a.at, Metric::distance);
    std::optional<std::size_t> best;
    for (std::size_t s = 0; s < stations_.size(); ++s) {
      if (a.tried[s] || a.avoid == s) continue;
      if (!best || dist[stations_[s].node] < dist[stations_[*best].node]) best = s;
    }
    if (!best) return false;
    if (!a.in_episode) {
      const Route direct = router_.route(a.at, a.trip_dest, Metric::time);
      a.in_episode = true;
      a.episode_start_h = t;
      a.direct_time_h = direct.time_h;
      a.direct_km = direct.length_km;
      a.episode_km = 0.0;
      a.episode_charge_h = 0.0;
    }
    a.station = *best;
    set_leg(a, stations_[*best].node, LegKind::to_station);
    at_node(i, t);
    return true;
  }

  void step(std::size_t i, double t) {
    auto& a = states_[i];
    const Edge& e = net_.edges()[a.leg[a.leg_pos]];
    const double need = a.spec->eta_kwh_per_km * e.length_km;
    if (config_.charging_enabled && need > a.soc) {
      push(t + e.travel_time_h() * (a.soc / need), i, EventKind::strand);
    } else {
      push(t + e.travel_time_h(), i, EventKind::edge_done);
    }
  }

  void edge_done(std::size_t i, double t) {
    auto& a = states_[i];
    const Edge& e = net_.edges()[a.leg[a.leg_pos]];
    const double need = a.spec->eta_kwh_per_km * e.length_km;
    a.m.energy_consumed_kwh += need;
    if (config_.charging_enabled) a.soc = std::max(0.0, a.soc - need);
    note_soc(a);
    a.m.distance_km += e.length_km;
    a.m.drive_time_h += e.travel_time_h();
    if (a.in_episode) a.episode_km += e.length_km;
    a.avoid.reset();
    a.at = e.to;
    ++a.leg_pos;
    at_node(i, t);
  }

  // Battery ran flat mid-edge: count the partial edge, then tow the EV to
  // the end of its current leg at no time cost.
  void strand(std::size_t i, double t) {
    auto& a = states_[i];
    const Edge& e = net_.edges()[a.leg[a.leg_pos]];
    const double f = a.soc / (a.spec->eta_kwh_per_km * e.length_km);
    a.m.energy_consumed_kwh += a.soc;
    a.soc = 0.0;
    note_soc(a);
    a.m.distance_km += f * e.length_km;
    a.m.drive_time_h += f * e.travel_time_h();
    if (a.in_episode) a.episode_km += f * e.length_km;
    ++a.m.strandings;
    a.avoid.reset();
    a.at = a.leg_target;
    a.leg.clear();
    a.leg_pos = 0;
    at_node(i, t);
  }

  void plug_in(std::size_t i, double t) {
    auto& a = states_[i];
    auto& st = stations_[a.station];
    auto& sm = station_metrics_[a.station];
    ++st.occupied;
    sm.max_occupied = std::max(sm.max_occupied, st.occupied);
    ++sm.plug_ins;
    ++a.m.charge_events;
    a.target_pct = draw_target(config_, a.threshold_rng, a.threshold_pct);
    a.charge_target_kwh = std::max(a.soc, a.target_pct / 100.0 * a.spec->battery_kwh);
    a.charging = true;
    a.plug_in_h = t;
    a.leg_kind = LegKind::none;
    push(t + (a.charge_target_kwh - a.soc) / st.power_kw, i, EventKind::charge_done);
  }

  void arrive_station(std::size_t i, double t) {
    auto& a = states_[i];
    const std::size_t s = a.station;
    auto& st = stations_[s];
    auto& sm = station_metrics_[s];
    a.tried[s] = true;
    if (st.occupied < st.plugs) {
      plug_in(i, t);
      return;
    }
    ++sm.rejections;
    ++a.m.failed_attempts;
    if (a.soc <= 0.0) {
      // A flat battery cannot move on: queue for the next free plug.
      a.leg_kind = LegKind::none;
      waiting_[s].push_back(i);
      return;
    }
    if (util::uniform01(a.decision_rng) < config_.redirect_probability) {
      a.leg_kind = LegKind::to_destination;  // head_to_station overrides on success
      if (head_to_station(i, t)) return;
    }
    // Defer: the next trigger starts a fresh search, except that the station
    // that just refused us is skipped until we have moved on.
    ++a.m.deferrals;
    a.trigger_pct = std::max(config_.defer_floor_pct, a.trigger_pct - config_.defer_step_pct);
    std::fill(a.tried.begin(), a.tried.end(), false);
    a.avoid = s;
    set_leg(a, a.trip_dest, LegKind::to_destination);
    at_node(i, t);
  }

  // `complete` is false when the horizon cuts the session short.
  void charge_done(std::size_t i, double t, bool complete) {
    auto& a = states_[i];
    auto& st = stations_[a.station];
    auto& sm = station_metrics_[a.station];
    const double dt = t - a.plug_in_h;
    const double energy = complete ? a.charge_target_kwh - a.soc
                                   : std::min(a.charge_target_kwh - a.soc, st.power_kw * dt);
    a.soc = complete ? a.charge_target_kwh : a.soc + energy;
    note_soc(a);
    a.m.energy_charged_kwh += energy;
    a.m.tau_charge_h += dt;
    a.episode_charge_h += dt;
    sm.energy_kwh += energy;
    sm.busy_h += dt;
    --st.occupied;
    a.charging = false;
    if (!complete) return;
    if (auto& queue = waiting_[a.station]; !queue.empty()) {
      const std::size_t next = queue.front();
      queue.pop_front();
      plug_in(next, t);
    }

    a.threshold_pct = draw_threshold(config_, a.threshold_rng);
    if (a.threshold_pct >= a.target_pct) {
      a.threshold_pct = std::max(config_.threshold_min_pct, a.target_pct - 5.0);
    }
    a.trigger_pct = a.threshold_pct;
    set_leg(a, a.trip_dest, LegKind::to_destination);
    at_node(i, t);
  }

  void finish_trip(std::size_t i, double t) {
    auto& a = states_[i];
    if (a.in_episode) {
      const double search = (t - a.episode_start_h) - a.episode_charge_h - a.direct_time_h;
      a.m.tau_search_h += std::max(0.0, search);
      a.m.detour_km += std::max(0.0, a.episode_km - a.direct_km);
      a.in_episode = false;
      std::fill(a.tried.begin(), a.tried.end(), false);
    }
    ++a.m.trips_completed;
    a.leg_kind = LegKind::none;
    schedule_trip(i, t);
  }

  SimMetrics collect() {
    SimMetrics out;
    out.horizon_h = horizon_h_;
    out.stations = station_metrics_;
    auto& f = out.fleet;
    f.n_ev = states_.size();
    double drive_h = 0.0;
    for (auto& a : states_) {
      a.m.soc_end_kwh = a.soc;
      a.m.tau_e_h = a.m.tau_search_h + a.m.tau_charge_h;
      f.mean_tau_e_h += a.m.tau_e_h;
      f.mean_tau_search_h += a.m.tau_search_h;
      f.mean_tau_charge_h += a.m.tau_charge_h;
      f.mean_distance_km += a.m.distance_km;
      f.mean_detour_km += a.m.detour_km;
      f.charge_events += a.m.charge_events;
      f.failed_attempts += a.m.failed_attempts;
      f.strandings += a.m.strandings;
      f.energy_consumed_kwh += a.m.energy_consumed_kwh;
      f.energy_charged_kwh += a.m.energy_charged_kwh;
      f.soc_delta_kwh += a.m.soc_end_kwh - a.m.soc_start_kwh;
      drive_h += a.m.drive_time_h;
      out.per_ev.push_back(a.m);
    }
    const double total_km = f.mean_distance_km;
    if (f.n_ev > 0) {
      const double n = static_cast<double>(f.n_ev);
      f.mean_tau_e_h /= n;
      f.mean_tau_search_h /= n;
      f.mean_tau_charge_h /= n;
      f.mean_distance_km /= n;
      f.mean_detour_km /= n;
    }
    f.eta_kwh_per_km = total_km > 0.0 ? f.energy_consumed_kwh / total_km : 0.0;
    f.speed_kmh = drive_h > 0.0 ? total_km / drive_h : 0.0;
    return out;
  }

  const RoadNetwork& net_;
  std::vector<ChargingStation> stations_;
  std::vector<StationMetrics> station_metrics_;
  std::vector<std::deque<std::size_t>> waiting_;
  const SimConfig& config_;
  Router router_;
  double horizon_h_;
  std::vector<AgentState> states_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
};

}  // namespace

InitialSoc parse_initial_soc(std::string_view name) {
  if (name == "full") return InitialSoc::full;
  if (name == "fixed") return InitialSoc::fixed;
  if (name == "stationary") return InitialSoc::stationary;
  throw InvalidParameter("unknown initial SoC policy '" + std::string(name) +
                         "' (expected full, fixed or stationary)");
}

std::string_view to_string(InitialSoc policy) {
  switch (policy) {
    case InitialSoc::full: return "full";
    case InitialSoc::fixed: return "fixed";
    case InitialSoc::stationary: return "stationary";
  }
  return "?";
}

void SimConfig::validate() const {
  if (!(horizon_days > 0.0) || !std::isfinite(horizon_days)) {
    throw InvalidParameter("horizon_days must be > 0");
  }
  if (!(redirect_probability >= 0.0 && redirect_probability <= 1.0)) {
    throw InvalidParameter("redirect_probability must lie in [0, 1]");
  }
  if (!(threshold_shape > 0.0 && threshold_scale > 0.0 && target_shape > 0.0 && target_scale > 0.0)) {
    throw InvalidParameter("Gamma shape and scale parameters must be > 0");
  }
  if (!(threshold_min_pct >= 0.0 && threshold_min_pct <= threshold_max_pct && threshold_max_pct < 100.0)) {
    throw InvalidParameter("threshold clamp must satisfy 0 <= min <= max < 100");
  }
  if (!(defer_step_pct >= 0.0) || !(defer_floor_pct >= 0.0)) {
    throw InvalidParameter("deferral step and floor must be >= 0");
  }
  auto pct = [](const std::optional<double>& v) { return !v || (*v >= 0.0 && *v <= 100.0); };
  if (!pct(fixed_threshold_pct) || !pct(fixed_target_pct)) {
    throw InvalidParameter("forced thresholds must lie in [0, 100]");
  }
  if (fixed_threshold_pct && fixed_target_pct && *fixed_threshold_pct >= *fixed_target_pct) {
    throw InvalidParameter("forced threshold must be below the forced target");
  }
  if (!(initial_soc_pct >= 0.0 && initial_soc_pct <= 100.0)) {
    throw InvalidParameter("initial_soc_pct must lie in [0, 100]");
  }
}

void EvAgent::validate(const RoadNetwork& net) const {
  const auto who = "EV " + std::to_string(id);
  if (!(battery_kwh > 0.0) || !std::isfinite(battery_kwh)) throw InvalidParameter(who + ": battery_kwh must be > 0");
  if (!(eta_kwh_per_km > 0.0) || !std::isfinite(eta_kwh_per_km)) {
    throw InvalidParameter(who + ": eta must be > 0");
  }
  if (!(soc_kwh >= 0.0 && soc_kwh <= battery_kwh)) {
    throw InvalidParameter(who + ": initial SoC must lie in [0, battery_kwh]");
  }
  double last = 0.0;
  for (const auto& t : schedule.trips) {
    if (t.origin >= net.node_count() || t.destination >= net.node_count()) {
      throw InvalidParameter(who + ": trip references a node outside the network");
    }
    if (t.origin == t.destination) throw InvalidParameter(who + ": trip origin equals destination");
    if (t.depart_s < last) throw InvalidParameter(who + ": departures must be nondecreasing");
    last = t.depart_s;
  }
}

std::vector<EvAgent> make_agents(const std::vector<AgentSchedule>& schedules, double battery_kwh,
                                 double eta_kwh_per_km, const SimConfig& config) {
  config.validate();
  const std::size_t n = schedules.size();
  // Stratified cycle positions: one uniform per stratum, strata shuffled.
  std::vector<std::size_t> strata(n);
  std::iota(strata.begin(), strata.end(), std::size_t{0});
  auto perm_rng = util::stream_rng(config.seed, {kStrataStream});
  for (std::size_t k = n; k > 1; --k) {
    const auto j = static_cast<std::size_t>(util::uniform01(perm_rng) * static_cast<double>(k));
    std::swap(strata[k - 1], strata[std::min(j, k - 1)]);
  }

  std::vector<EvAgent> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    EvAgent a;
    a.id = schedules[i].ev_id;
    a.battery_kwh = battery_kwh;
    a.eta_kwh_per_km = eta_kwh_per_km;
    a.schedule = schedules[i];
    switch (config.initial_soc) {
      case InitialSoc::full: a.soc_kwh = battery_kwh; break;
      case InitialSoc::fixed: a.soc_kwh = config.initial_soc_pct / 100.0 * battery_kwh; break;
      case InitialSoc::stationary: {
        auto rng = util::stream_rng(config.seed, {static_cast<std::uint64_t>(a.id), kInitialStream});
        const double cs = draw_threshold(config, rng);
        const double cd = draw_target(config, rng, cs);
        const double u = (static_cast<double>(strata[i]) + util::uniform01(rng)) / static_cast<double>(n);
        a.first_threshold_pct = cs;
        a.soc_kwh = std::min(battery_kwh, (cs + u * (cd - cs)) / 100.0 * battery_kwh);
        break;
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

SimMetrics run_simulation(const RoadNetwork& net, const std::vector<ChargingStation>& stations,
                          const std::vector<EvAgent>& agents, const SimConfig& config) {
  config.validate();
  if (agents.empty()) throw InvalidParameter("simulation needs at least one EV");
  for (const auto& a : agents) a.validate(net);
  for (const auto& s : stations) {
    if (s.node >= net.node_count()) throw InvalidParameter("station outside the network");
    if (s.plugs < 1 || s.occupied < 0 || s.occupied > s.plugs) {
      throw InvalidParameter("station " + std::to_string(s.id) + ": need 0 <= occupied <= plugs, plugs >= 1");
    }
    if (!(s.power_kw > 0.0)) throw InvalidParameter("station " + std::to_string(s.id) + ": power must be > 0");
  }
  return Simulation(net, stations, agents, config).run();
}

}  // namespace evcap::sim
