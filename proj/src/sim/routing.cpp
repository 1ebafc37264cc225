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

#include "evcap/sim/routing.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

#include "evcap/errors.hpp"

namespace evcap::sim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One-to-all (forward) or all-to-one (reverse) Dijkstra.
std::vector<double> dijkstra(const RoadNetwork& net, NodeIndex root, Metric metric, bool reverse) {
  std::vector<double> dist(net.node_count(), kInf);
  using Item = std::pair<double, NodeIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[root] = 0.0;
  queue.emplace(0.0, root);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    const auto& adj = reverse ? net.in_edges(u) : net.out_edges(u);
    for (EdgeIndex e : adj) {
      const Edge& edge = net.edges()[e];
      const NodeIndex v = reverse ? edge.from : edge.to;
      const double nd = d + edge_cost(edge, metric);
      if (nd < dist[v]) {
        dist[v] = nd;
        queue.emplace(nd, v);
      }
    }
  }
  return dist;
}

bool same_cost(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Walks from `from` along edges that stay on a shortest path to the target
// described by `to_target`, taking the smallest next-node id on ties.
Route walk(const RoadNetwork& net, NodeIndex from, NodeIndex to, Metric metric,
           const std::vector<double>& to_target) {
  if (!std::isfinite(to_target[from])) {
    throw NoPath("no path from node " + std::to_string(net.nodes()[from].id) + " to node " +
                 std::to_string(net.nodes()[to].id));
  }
  Route r;
  r.cost = to_target[from];
  r.nodes.push_back(from);
  NodeIndex u = from;
  while (u != to) {
    std::optional<EdgeIndex> pick;
    for (EdgeIndex e : net.out_edges(u)) {  // ordered by head id
      const Edge& edge = net.edges()[e];
      if (same_cost(edge_cost(edge, metric) + to_target[edge.to], to_target[u])) {
        pick = e;
        break;
      }
    }
    if (!pick) throw NoPath("shortest path reconstruction failed");
    const Edge& edge = net.edges()[*pick];
    r.edges.push_back(*pick);
    r.length_km += edge.length_km;
    r.time_h += edge.travel_time_h();
    u = edge.to;
    r.nodes.push_back(u);
    if (r.edges.size() > net.edges().size()) throw NoPath("shortest path reconstruction looped");
  }
  return r;
}

}  // namespace

Metric parse_metric(std::string_view name) {
  if (name == "time") return Metric::time;
  if (name == "distance") return Metric::distance;
  throw InvalidParameter("unknown routing metric '" + std::string(name) + "'");
}

double edge_cost(const Edge& e, Metric metric) {
  return metric == Metric::time ? e.travel_time_h() : e.length_km;
}

Route shortest_path(const RoadNetwork& net, NodeIndex from, NodeIndex to, Metric metric) {
  if (from >= net.node_count() || to >= net.node_count()) {
    throw InvalidParameter("shortest_path: node index out of range");
  }
  return walk(net, from, to, metric, dijkstra(net, to, metric, true));
}

const std::vector<double>& Router::costs_to(NodeIndex to, Metric metric) {
  auto& cache = to_[metric == Metric::time ? 0 : 1];
  if (cache.empty()) cache.resize(net_.node_count());
  auto& slot = cache[to];
  if (!slot) slot = dijkstra(net_, to, metric, true);
  return *slot;
}

const std::vector<double>& Router::costs_from(NodeIndex from, Metric metric) {
  auto& cache = from_[metric == Metric::time ? 0 : 1];
  if (cache.empty()) cache.resize(net_.node_count());
  auto& slot = cache[from];
  if (!slot) slot = dijkstra(net_, from, metric, false);
  return *slot;
}

Route Router::route(NodeIndex from, NodeIndex to, Metric metric) {
  return walk(net_, from, to, metric, costs_to(to, metric));
}

double Router::cost(NodeIndex from, NodeIndex to, Metric metric) {
  const double c = costs_to(to, metric)[from];
  if (!std::isfinite(c)) throw NoPath("no path between nodes");
  return c;
}

}  // namespace evcap::sim
