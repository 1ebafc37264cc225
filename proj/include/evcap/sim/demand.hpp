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
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "evcap/sim/network.hpp"
#include "evcap/sim/routing.hpp"

namespace evcap::sim {

enum class TripPurpose { commute_out, commute_back, errand_out, errand_back, external };

std::string_view to_string(TripPurpose purpose);

struct Trip {
  double depart_s = 0.0;  // seconds from simulation start
  NodeIndex origin = 0;
  NodeIndex destination = 0;
  TripPurpose purpose = TripPurpose::external;
};

struct AgentSchedule {
  std::int64_t ev_id = 0;
  NodeIndex home = 0;
  NodeIndex work = 0;
  std::vector<Trip> trips;  // depart times nondecreasing
};

// Parameters of the commute-plus-errands demand generator.
struct DemandProfile {
  int days = 7;
  double morning_depart_h = 7.5;
  double evening_depart_h = 17.5;
  double depart_jitter_h = 0.5;     // std-dev of commute departure jitter
  double errand_rate_per_day = 1.0; // Poisson mean of evening errands
  double errand_radius_km = 5.0;    // errand destinations lie within this of home
  double commute_radius_km = 0.0;   // work within this of home; 0 = anywhere

  void validate() const;
};

// Per EV: home and work nodes, a commute out and back every day, and a
// Poisson number of evening home-errand-home round trips. Deterministic in
// `seed`; the errand count uses inversion sampling so for a fixed seed each
// day's count is nondecreasing in the errand rate.
std::vector<AgentSchedule> generate_demand(const RoadNetwork& net, std::size_t n_ev,
                                           const DemandProfile& profile, std::uint64_t seed);

// Mean routed (shortest-time) distance per EV per day.
double mean_daily_distance(Router& router, const std::vector<AgentSchedule>& schedules, double days);

struct CalibrationResult {
  DemandProfile profile;
  double mean_daily_km = 0.0;
  int iterations = 0;
};

// Bisects the errand rate (or, when even zero errands overshoot, the commute
// radius) until the mean daily distance is within `tolerance` of the target.
// Throws CalibrationFailed when the target is out of reach.
CalibrationResult calibrate_demand(const RoadNetwork& net, const DemandProfile& profile,
                                   std::size_t n_ev, double target_daily_km, std::uint64_t seed,
                                   double tolerance = 0.05);

inline constexpr double kMaxErrandRate = 12.0;

// CSV `ev_id,depart_s,origin,destination` (node ids). Rows are grouped by
// ev_id in ascending order.
std::vector<AgentSchedule> parse_trips(std::istream& in, const RoadNetwork& net,
                                       std::string_view source_name);
std::vector<AgentSchedule> load_trips(const std::filesystem::path& path, const RoadNetwork& net);

}  // namespace evcap::sim
