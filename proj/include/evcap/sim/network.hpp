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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace evcap::sim {

using NodeId = std::int64_t;       // identifier as written in input files
using NodeIndex = std::size_t;     // dense index into RoadNetwork::nodes()
using EdgeIndex = std::size_t;

struct Node {
  NodeId id = 0;
  double x_km = 0.0;
  double y_km = 0.0;
};

// Directed road segment.
struct Edge {
  std::int64_t id = 0;
  NodeIndex from = 0;
  NodeIndex to = 0;
  double length_km = 0.0;
  double speed_kmh = 0.0;

  double travel_time_h() const { return length_km / speed_kmh; }
};

// Input description of an edge; two-way edges expand into two directed edges
// sharing the same id.
struct EdgeSpec {
  std::int64_t id = 0;
  NodeId from = 0;
  NodeId to = 0;
  std::optional<double> length_km;  // Euclidean node distance when absent
  double speed_kmh = 50.0;
  bool oneway = false;
};

class RoadNetwork {
 public:
  // Validates ids, lengths, speeds and strong connectivity. Throws
  // ParseError or DisconnectedNetwork.
  static RoadNetwork build(std::vector<Node> nodes, const std::vector<EdgeSpec>& edges,
                           std::optional<double> area_km2 = std::nullopt);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  // Outgoing edge indices of `n`, ordered by head node id.
  const std::vector<EdgeIndex>& out_edges(NodeIndex n) const { return out_[n]; }
  const std::vector<EdgeIndex>& in_edges(NodeIndex n) const { return in_[n]; }

  std::size_t node_count() const { return nodes_.size(); }
  std::optional<NodeIndex> find(NodeId id) const;
  NodeIndex index_of(NodeId id) const;  // throws InvalidParameter

  // Area used for station density; the bounding box unless given explicitly.
  double area_km2() const { return area_km2_; }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeIndex>> out_;
  std::vector<std::vector<EdgeIndex>> in_;
  std::unordered_map<NodeId, NodeIndex> index_;
  double area_km2_ = 0.0;
};

// Square lattice of n x n blocks over `total_area_km2`: (n+1)^2 nodes with
// spacing sqrt(area)/n and two-way edges at a uniform speed. Node ids are
// row-major from the south-west corner (id = row * (n+1) + col).
RoadNetwork generate_grid_network(std::size_t blocks_per_side, double total_area_km2,
                                  double speed_kmh = 50.0);

// JSON: {"nodes": [{id, x_km, y_km}], "edges": [{id, from, to, length_km?,
// speed_kmh, oneway?}], "area_km2"?}. Throws ParseError / DisconnectedNetwork.
RoadNetwork load_network(const std::filesystem::path& path);
RoadNetwork parse_network(std::istream& in, std::string_view source_name);

}  // namespace evcap::sim
