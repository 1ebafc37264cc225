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

#include "evcap/sim/demand.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "evcap/errors.hpp"
#include "evcap/util/csv.hpp"
#include "evcap/util/rng.hpp"

namespace evcap::sim {
namespace {

constexpr std::uint64_t kHomeWorkStream = 1;
constexpr std::uint64_t kDayStream = 2;
constexpr std::uint64_t kErrandStream = 3;

double distance(const RoadNetwork& net, NodeIndex a, NodeIndex b) {
  const auto& na = net.nodes()[a];
  const auto& nb = net.nodes()[b];
  return std::hypot(na.x_km - nb.x_km, na.y_km - nb.y_km);
}

// Nodes other than `centre` within `radius` (all other nodes when radius is
// 0); falls back to the nearest other node when the disc is empty.
std::vector<NodeIndex> candidates(const RoadNetwork& net, NodeIndex centre, double radius) {
  std::vector<NodeIndex> out;
  NodeIndex nearest = centre;
  double nearest_d = std::numeric_limits<double>::infinity();
  for (NodeIndex i = 0; i < net.node_count(); ++i) {
    if (i == centre) continue;
    const double d = distance(net, centre, i);
    if (radius <= 0.0 || d <= radius + 1e-9) out.push_back(i);
    if (d < nearest_d) {
      nearest_d = d;
      nearest = i;
    }
  }
  if (out.empty() && nearest != centre) out.push_back(nearest);
  return out;
}

NodeIndex pick(const std::vector<NodeIndex>& from, double u) {
  const auto k = std::min(from.size() - 1, static_cast<std::size_t>(u * static_cast<double>(from.size())));
  return from[k];
}

int poisson_inverse(double lambda, double u) {
  if (lambda <= 0.0) return 0;
  int k = 0;
  double p = std::exp(-lambda);
  double cdf = p;
  while (u > cdf && k < 1000) {
    ++k;
    p *= lambda / k;
    cdf += p;
    if (p == 0.0) break;
  }
  return k;
}

}  // namespace

std::string_view to_string(TripPurpose purpose) {
  switch (purpose) {
    case TripPurpose::commute_out: return "commute_out";
    case TripPurpose::commute_back: return "commute_back";
    case TripPurpose::errand_out: return "errand_out";
    case TripPurpose::errand_back: return "errand_back";
    case TripPurpose::external: return "external";
  }
  return "?";
}

void DemandProfile::validate() const {
  if (days < 1) throw InvalidParameter("demand needs at least one day");
  if (!(depart_jitter_h >= 0.0)) throw InvalidParameter("departure jitter must be >= 0");
  if (!(errand_rate_per_day >= 0.0) || !std::isfinite(errand_rate_per_day)) {
    throw InvalidParameter("errand rate must be >= 0");
  }
  if (!(errand_radius_km >= 0.0) || !(commute_radius_km >= 0.0)) {
    throw InvalidParameter("sampling radii must be >= 0");
  }
  if (!(morning_depart_h >= 0.0 && morning_depart_h < evening_depart_h && evening_depart_h < 24.0)) {
    throw InvalidParameter("commute departures must satisfy 0 <= morning < evening < 24 h");
  }
}

std::vector<AgentSchedule> generate_demand(const RoadNetwork& net, std::size_t n_ev,
                                           const DemandProfile& profile, std::uint64_t seed) {
  if (n_ev < 1) throw InvalidParameter("demand needs at least one EV");
  if (net.node_count() < 2) throw InvalidParameter("demand needs a network with two or more nodes");
  profile.validate();

  std::vector<AgentSchedule> out;
  out.reserve(n_ev);
  for (std::size_t ev = 0; ev < n_ev; ++ev) {
    AgentSchedule s;
    s.ev_id = static_cast<std::int64_t>(ev);
    auto hw = util::stream_rng(seed, {ev, kHomeWorkStream});
    s.home = static_cast<NodeIndex>(util::uniform01(hw) * static_cast<double>(net.node_count()));
    s.home = std::min(s.home, net.node_count() - 1);
    s.work = pick(candidates(net, s.home, profile.commute_radius_km), util::uniform01(hw));
    const auto errand_nodes = candidates(net, s.home, profile.errand_radius_km);

    for (int day = 0; day < profile.days; ++day) {
      const double day_s = 86400.0 * day;
      auto rng = util::stream_rng(seed, {ev, static_cast<std::uint64_t>(day), kDayStream});
      const double u_count = util::uniform01(rng);
      std::normal_distribution<double> jitter(0.0, profile.depart_jitter_h);
      const double j_out = profile.depart_jitter_h > 0 ? jitter(rng) : 0.0;
      const double j_back = profile.depart_jitter_h > 0 ? jitter(rng) : 0.0;
      const double out_h = std::clamp(profile.morning_depart_h + j_out, 0.0, profile.evening_depart_h);
      const double back_h = std::clamp(profile.evening_depart_h + j_back, out_h, 23.0);
      s.trips.push_back({day_s + out_h * 3600.0, s.home, s.work, TripPurpose::commute_out});
      s.trips.push_back({day_s + back_h * 3600.0, s.work, s.home, TripPurpose::commute_back});

      const int errands = poisson_inverse(profile.errand_rate_per_day, u_count);
      if (errands == 0) continue;
      const double window_start = std::min(back_h + 1.0, 23.0);
      const double slot = (23.75 - window_start) / errands;
      for (int k = 0; k < errands; ++k) {
        auto er = util::stream_rng(seed, {ev, static_cast<std::uint64_t>(day),
                                          static_cast<std::uint64_t>(k), kErrandStream});
        const NodeIndex target = pick(errand_nodes, util::uniform01(er));
        const double leave_h = window_start + slot * (k + 0.25 * util::uniform01(er));
        const double return_h = leave_h + 0.5 * slot;
        s.trips.push_back({day_s + leave_h * 3600.0, s.home, target, TripPurpose::errand_out});
        s.trips.push_back({day_s + return_h * 3600.0, target, s.home, TripPurpose::errand_back});
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

double mean_daily_distance(Router& router, const std::vector<AgentSchedule>& schedules, double days) {
  if (schedules.empty() || !(days > 0.0)) throw InvalidParameter("no schedules to measure");
  double total = 0.0;
  for (const auto& s : schedules) {
    for (const auto& t : s.trips) total += router.route(t.origin, t.destination, Metric::time).length_km;
  }
  return total / (static_cast<double>(schedules.size()) * days);
}

CalibrationResult calibrate_demand(const RoadNetwork& net, const DemandProfile& profile,
                                   std::size_t n_ev, double target_daily_km, std::uint64_t seed,
                                   double tolerance) {
  if (!(target_daily_km > 0.0)) throw InvalidParameter("calibration target must be > 0");
  profile.validate();
  Router router(net);
  CalibrationResult result{profile, 0.0, 0};
  auto measure = [&](const DemandProfile& p) {
    ++result.iterations;
    return mean_daily_distance(router, generate_demand(net, n_ev, p, seed), p.days);
  };
  auto close_enough = [&](double m) { return std::abs(m - target_daily_km) <= tolerance * target_daily_km; };
  constexpr int kMaxSteps = 60;

  const double current = measure(profile);
  if (close_enough(current)) {
    result.mean_daily_km = current;
    return result;
  }

  DemandProfile p = profile;
  p.errand_rate_per_day = 0.0;
  const double floor_km = measure(p);
  if (floor_km > target_daily_km) {
    // Commutes alone overshoot: shrink the home-work radius.
    double hi = profile.commute_radius_km;
    if (hi <= 0.0) {
      for (NodeIndex i = 0; i < net.node_count(); ++i) {
        for (NodeIndex j = i + 1; j < net.node_count(); ++j) hi = std::max(hi, distance(net, i, j));
      }
    }
    double lo = 0.0;
    for (int step = 0; step < kMaxSteps; ++step) {
      p.commute_radius_km = 0.5 * (lo + hi);
      const double m = measure(p);
      if (close_enough(m)) {
        result.profile = p;
        result.mean_daily_km = m;
        return result;
      }
      (m > target_daily_km ? hi : lo) = p.commute_radius_km;
    }
    throw CalibrationFailed("could not reach " + std::to_string(target_daily_km) +
                            " km/day by shrinking the commute radius");
  }

  p.errand_rate_per_day = kMaxErrandRate;
  if (measure(p) < target_daily_km * (1.0 - tolerance)) {
    throw CalibrationFailed("target of " + std::to_string(target_daily_km) +
                            " km/day exceeds what the network supports at the maximum errand rate");
  }
  double lo = 0.0, hi = kMaxErrandRate;
  for (int step = 0; step < kMaxSteps; ++step) {
    p.errand_rate_per_day = 0.5 * (lo + hi);
    const double m = measure(p);
    if (close_enough(m)) {
      result.profile = p;
      result.mean_daily_km = m;
      return result;
    }
    (m > target_daily_km ? hi : lo) = p.errand_rate_per_day;
  }
  throw CalibrationFailed("errand-rate bisection did not converge");
}

std::vector<AgentSchedule> parse_trips(std::istream& in, const RoadNetwork& net,
                                       std::string_view source_name) {
  const auto table = util::read_csv(in, {"ev_id", "depart_s", "origin", "destination"}, source_name);
  const std::string src(source_name);
  std::map<std::int64_t, AgentSchedule> by_ev;
  for (const auto& row : table.rows) {
    const auto ev = util::parse_int(row, 0, source_name);
    const double depart = util::parse_double(row, 1, source_name);
    const auto where = src + ":" + std::to_string(row.line);
    auto node = [&](std::size_t col) {
      const auto id = util::parse_int(row, col, source_name);
      const auto idx = net.find(id);
      if (!idx) throw ParseError(where + ": unknown node id " + std::to_string(id));
      return *idx;
    };
    Trip t{depart, node(2), node(3), TripPurpose::external};
    if (t.origin == t.destination) throw ParseError(where + ": origin equals destination");
    if (depart < 0.0) throw ParseError(where + ": depart_s must be >= 0");
    auto [it, fresh] = by_ev.try_emplace(ev);
    auto& s = it->second;
    if (fresh) {
      s.ev_id = ev;
      s.home = t.origin;
      s.work = t.destination;
    } else if (depart < s.trips.back().depart_s) {
      throw ParseError(where + ": departures must be nondecreasing per EV");
    }
    s.trips.push_back(t);
  }
  if (by_ev.empty()) throw ParseError(src + ": no trips");
  std::vector<AgentSchedule> out;
  for (auto& [_, s] : by_ev) out.push_back(std::move(s));
  return out;
}

std::vector<AgentSchedule> load_trips(const std::filesystem::path& path, const RoadNetwork& net) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trips file '" + path.string() + "'");
  return parse_trips(in, net, path.string());
}

}  // namespace evcap::sim
