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

#include <optional>
#include <string_view>
#include <vector>

#include "evcap/sim/network.hpp"

namespace evcap::sim {

enum class Metric { time, distance };

Metric parse_metric(std::string_view name);

struct Route {
  std::vector<EdgeIndex> edges;
  std::vector<NodeIndex> nodes;  // from ... to; a single node when from == to
  double cost = 0.0;             // hours for Metric::time, km for Metric::distance
  double length_km = 0.0;
  double time_h = 0.0;
};

double edge_cost(const Edge& e, Metric metric);

// Optimal path under `metric`. Among equal-cost alternatives the path moves
// to the smallest next-node id at every step. Throws NoPath.
Route shortest_path(const RoadNetwork& net, NodeIndex from, NodeIndex to, Metric metric);

// Memoizing router for one simulation run. Not thread-safe; each run owns
// its own instance.
class Router {
 public:
  explicit Router(const RoadNetwork& net) : net_(net) {}

  Route route(NodeIndex from, NodeIndex to, Metric metric);
  double cost(NodeIndex from, NodeIndex to, Metric metric);
  // Costs from `from` to every node.
  const std::vector<double>& costs_from(NodeIndex from, Metric metric);

  const RoadNetwork& network() const { return net_; }

 private:
  const std::vector<double>& costs_to(NodeIndex to, Metric metric);

  const RoadNetwork& net_;
  std::vector<std::optional<std::vector<double>>> to_[2];
  std::vector<std::optional<std::vector<double>>> from_[2];
};

}  // namespace evcap::sim
