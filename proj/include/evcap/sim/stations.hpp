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

namespace evcap::sim {

struct ChargingStation {
  std::int64_t id = 0;
  NodeIndex node = 0;
  double power_kw = 20.0;
  int plugs = 1;
  int occupied = 0;
};

// CSV `id,node_id,power_kw,plugs`. Throws ParseError naming the row.
std::vector<ChargingStation> parse_stations(std::istream& in, const RoadNetwork& net,
                                            std::string_view source_name);
std::vector<ChargingStation> load_stations(const std::filesystem::path& path,
                                           const RoadNetwork& net);

// Spreads `count` stations over the network's bounding box on a regular
// layout, snapping each cell centre to the nearest unused node.
std::vector<ChargingStation> place_uniform(const RoadNetwork& net, std::size_t count,
                                           double power_kw = 20.0, int plugs = 1);

// First `count` nodes of a seeded random node order. Increasing `count`
// keeps the earlier stations where they were.
std::vector<ChargingStation> place_random_incremental(const RoadNetwork& net, std::size_t count,
                                                      std::uint64_t seed, double power_kw = 20.0,
                                                      int plugs = 1);

// Stations packed along the northernmost road starting at its western end.
std::vector<ChargingStation> place_concentrated(const RoadNetwork& net, std::size_t count,
                                                double power_kw = 20.0, int plugs = 1);

}  // namespace evcap::sim
