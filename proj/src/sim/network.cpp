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

#include "evcap/sim/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <sstream>
#include <string>

#include "evcap/errors.hpp"

namespace evcap::sim {
namespace {

// Kosaraju over the directed graph; returns a component label per node.
std::vector<std::size_t> strong_components(const RoadNetwork& net, std::size_t& count) {
  const std::size_t n = net.node_count();
  std::vector<char> seen(n, 0);
  std::vector<NodeIndex> order;
  order.reserve(n);
  for (NodeIndex root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<NodeIndex, std::size_t>> stack{{root, 0}};
    seen[root] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      const auto& out = net.out_edges(u);
      if (next < out.size()) {
        const NodeIndex v = net.edges()[out[next++]].to;
        if (!seen[v]) {
          seen[v] = 1;
          stack.emplace_back(v, 0);
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }
  constexpr auto kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(n, kUnset);
  count = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (label[*it] != kUnset) continue;
    std::vector<NodeIndex> stack{*it};
    label[*it] = count;
    while (!stack.empty()) {
      const NodeIndex u = stack.back();
      stack.pop_back();
      for (EdgeIndex e : net.in_edges(u)) {
        const NodeIndex v = net.edges()[e].from;
        if (label[v] == kUnset) {
          label[v] = count;
          stack.push_back(v);
        }
      }
    }
    ++count;
  }
  return label;
}

}  // namespace

std::optional<NodeIndex> RoadNetwork::find(NodeId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex RoadNetwork::index_of(NodeId id) const {
  const auto idx = find(id);
  if (!idx) throw InvalidParameter("unknown node id " + std::to_string(id));
  return *idx;
}

RoadNetwork RoadNetwork::build(std::vector<Node> nodes, const std::vector<EdgeSpec>& edges,
                               std::optional<double> area_km2) {
  RoadNetwork net;
  if (nodes.empty()) throw ParseError("network has no nodes");
  net.nodes_ = std::move(nodes);
  for (NodeIndex i = 0; i < net.nodes_.size(); ++i) {
    const auto& node = net.nodes_[i];
    if (!std::isfinite(node.x_km) || !std::isfinite(node.y_km)) {
      throw ParseError("node " + std::to_string(node.id) + " has non-finite coordinates");
    }
    if (!net.index_.emplace(node.id, i).second) {
      throw ParseError("duplicate node id " + std::to_string(node.id));
    }
  }
  for (const auto& spec : edges) {
    const auto from = net.find(spec.from);
    const auto to = net.find(spec.to);
    if (!from) {
      throw ParseError("edge " + std::to_string(spec.id) + " references unknown node " +
                       std::to_string(spec.from));
    }
    if (!to) {
      throw ParseError("edge " + std::to_string(spec.id) + " references unknown node " +
                       std::to_string(spec.to));
    }
    if (*from == *to) throw ParseError("edge " + std::to_string(spec.id) + " is a self-loop");
    const auto& a = net.nodes_[*from];
    const auto& b = net.nodes_[*to];
    const double length = spec.length_km.value_or(std::hypot(a.x_km - b.x_km, a.y_km - b.y_km));
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw ParseError("edge " + std::to_string(spec.id) + " must have length > 0");
    }
    if (!(spec.speed_kmh > 0.0) || !std::isfinite(spec.speed_kmh)) {
      throw ParseError("edge " + std::to_string(spec.id) + " must have speed > 0");
    }
    net.edges_.push_back({spec.id, *from, *to, length, spec.speed_kmh});
    if (!spec.oneway) net.edges_.push_back({spec.id, *to, *from, length, spec.speed_kmh});
  }

  net.out_.assign(net.nodes_.size(), {});
  net.in_.assign(net.nodes_.size(), {});
  for (EdgeIndex e = 0; e < net.edges_.size(); ++e) {
    net.out_[net.edges_[e].from].push_back(e);
    net.in_[net.edges_[e].to].push_back(e);
  }
  for (auto& out : net.out_) {
    std::stable_sort(out.begin(), out.end(), [&](EdgeIndex l, EdgeIndex r) {
      return net.nodes_[net.edges_[l].to].id < net.nodes_[net.edges_[r].to].id;
    });
  }

  std::size_t components = 0;
  const auto label = strong_components(net, components);
  if (components > 1) {
    std::vector<std::vector<NodeId>> groups(components);
    for (NodeIndex i = 0; i < label.size(); ++i) groups[label[i]].push_back(net.nodes_[i].id);
    const auto largest = std::max_element(groups.begin(), groups.end(), [](const auto& l, const auto& r) {
      return l.size() < r.size();
    });
    std::ostringstream msg;
    msg << "network is not strongly connected (" << components << " components); orphan components:";
    for (auto it = groups.begin(); it != groups.end(); ++it) {
      if (it == largest) continue;
      std::sort(it->begin(), it->end());
      msg << " [";
      for (std::size_t k = 0; k < it->size() && k < 10; ++k) msg << (k ? " " : "") << (*it)[k];
      if (it->size() > 10) msg << " ...";
      msg << "]";
    }
    throw DisconnectedNetwork(msg.str());
  }

  if (area_km2) {
    if (!(*area_km2 > 0.0)) throw ParseError("network area must be > 0");
    net.area_km2_ = *area_km2;
  } else {
    double x0 = net.nodes_[0].x_km, x1 = x0, y0 = net.nodes_[0].y_km, y1 = y0;
    for (const auto& node : net.nodes_) {
      x0 = std::min(x0, node.x_km);
      x1 = std::max(x1, node.x_km);
      y0 = std::min(y0, node.y_km);
      y1 = std::max(y1, node.y_km);
    }
    net.area_km2_ = (x1 - x0) * (y1 - y0);
  }
  return net;
}

RoadNetwork generate_grid_network(std::size_t blocks_per_side, double total_area_km2,
                                  double speed_kmh) {
  if (blocks_per_side < 1) throw InvalidParameter("grid needs at least one block per side");
  if (!(total_area_km2 > 0.0)) throw InvalidParameter("grid area must be > 0");
  if (!(speed_kmh > 0.0)) throw InvalidParameter("grid speed must be > 0");
  const std::size_t side = blocks_per_side + 1;
  const double spacing = std::sqrt(total_area_km2) / static_cast<double>(blocks_per_side);
  std::vector<Node> nodes;
  nodes.reserve(side * side);
  for (std::size_t row = 0; row < side; ++row) {
    for (std::size_t col = 0; col < side; ++col) {
      nodes.push_back({static_cast<NodeId>(row * side + col), static_cast<double>(col) * spacing,
                       static_cast<double>(row) * spacing});
    }
  }
  std::vector<EdgeSpec> edges;
  std::int64_t next_id = 0;
  for (std::size_t row = 0; row < side; ++row) {
    for (std::size_t col = 0; col < side; ++col) {
      const auto id = static_cast<NodeId>(row * side + col);
      if (col + 1 < side) edges.push_back({next_id++, id, id + 1, spacing, speed_kmh, false});
      if (row + 1 < side) {
        edges.push_back({next_id++, id, id + static_cast<NodeId>(side), spacing, speed_kmh, false});
      }
    }
  }
  return RoadNetwork::build(std::move(nodes), edges, total_area_km2);
}

RoadNetwork parse_network(std::istream& in, std::string_view source_name) {
  using nlohmann::json;
  const std::string src(source_name);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(src + ": invalid JSON: " + e.what());
  }
  auto field = [&](const json& obj, const char* key, const std::string& where) -> const json& {
    if (!obj.is_object() || !obj.contains(key)) {
      throw ParseError(src + ": " + where + " is missing field '" + key + "'");
    }
    return obj.at(key);
  };
  auto number = [&](const json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(src + ": " + where + " must be a number");
    return v.get<double>();
  };
  auto integer = [&](const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ParseError(src + ": " + where + " must be an integer");
    return v.get<std::int64_t>();
  };

  const json& jnodes = field(doc, "nodes", "network");
  const json& jedges = field(doc, "edges", "network");
  if (!jnodes.is_array() || !jedges.is_array()) throw ParseError(src + ": nodes/edges must be arrays");
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < jnodes.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    const json& n = jnodes[i];
    nodes.push_back({integer(field(n, "id", where), where + ".id"),
                     number(field(n, "x_km", where), where + ".x_km"),
                     number(field(n, "y_km", where), where + ".y_km")});
  }
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < jedges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const json& e = jedges[i];
    EdgeSpec spec;
    spec.id = integer(field(e, "id", where), where + ".id");
    spec.from = integer(field(e, "from", where), where + ".from");
    spec.to = integer(field(e, "to", where), where + ".to");
    if (e.contains("length_km") && !e.at("length_km").is_null()) {
      spec.length_km = number(e.at("length_km"), where + ".length_km");
    }
    spec.speed_kmh = number(field(e, "speed_kmh", where), where + ".speed_kmh");
    if (e.contains("oneway")) {
      if (!e.at("oneway").is_boolean()) throw ParseError(src + ": " + where + ".oneway must be a boolean");
      spec.oneway = e.at("oneway").get<bool>();
    }
    edges.push_back(spec);
  }
  std::optional<double> area;
  if (doc.contains("area_km2")) area = number(doc.at("area_km2"), "area_km2");
  try {
    return RoadNetwork::build(std::move(nodes), edges, area);
  } catch (const ParseError& e) {
    throw ParseError(src + ": " + e.what());
  }
}

RoadNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open network file '" + path.string() + "'");
  return parse_network(in, path.string());
}

}  // namespace evcap::sim
