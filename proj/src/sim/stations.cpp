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

#include "evcap/sim/stations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "evcap/errors.hpp"
#include "evcap/util/csv.hpp"
#include "evcap/util/rng.hpp"

namespace evcap::sim {
namespace {

void check_count(const RoadNetwork& net, std::size_t count) {
  if (count > net.node_count()) {
    throw InvalidParameter("cannot place " + std::to_string(count) + " stations on " +
                           std::to_string(net.node_count()) + " nodes");
  }
}

std::vector<ChargingStation> at_nodes(const std::vector<NodeIndex>& nodes, double power_kw, int plugs) {
  std::vector<ChargingStation> out;
  out.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out.push_back({static_cast<std::int64_t>(i), nodes[i], power_kw, plugs, 0});
  }
  return out;
}

}  // namespace

std::vector<ChargingStation> parse_stations(std::istream& in, const RoadNetwork& net,
                                            std::string_view source_name) {
  const auto table = util::read_csv(in, {"id", "node_id", "power_kw", "plugs"}, source_name);
  std::vector<ChargingStation> out;
  const std::string src(source_name);
  for (const auto& row : table.rows) {
    ChargingStation s;
    s.id = util::parse_int(row, 0, source_name);
    const auto node_id = util::parse_int(row, 1, source_name);
    const auto node = net.find(node_id);
    if (!node) {
      throw ParseError(src + ":" + std::to_string(row.line) + ": unknown node id " +
                       std::to_string(node_id));
    }
    s.node = *node;
    s.power_kw = util::parse_double(row, 2, source_name);
    const auto plugs = util::parse_int(row, 3, source_name);
    if (!(s.power_kw > 0.0) || plugs < 1) {
      throw ParseError(src + ":" + std::to_string(row.line) + ": power_kw must be > 0 and plugs >= 1");
    }
    s.plugs = static_cast<int>(plugs);
    out.push_back(s);
  }
  return out;
}

std::vector<ChargingStation> load_stations(const std::filesystem::path& path, const RoadNetwork& net) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open stations file '" + path.string() + "'");
  return parse_stations(in, net, path.string());
}

std::vector<ChargingStation> place_uniform(const RoadNetwork& net, std::size_t count,
                                           double power_kw, int plugs) {
  check_count(net, count);
  if (count == 0) return {};
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  for (const auto& n : net.nodes()) {
    x0 = std::min(x0, n.x_km);
    x1 = std::max(x1, n.x_km);
    y0 = std::min(y0, n.y_km);
    y1 = std::max(y1, n.y_km);
  }
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));
  const std::size_t rows = (count + cols - 1) / cols;
  std::vector<char> used(net.node_count(), 0);
  std::vector<NodeIndex> picked;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t r = k / cols;
    const std::size_t c = k % cols;
    // The last row may be partial; centre its cells across the full width.
    const std::size_t in_row = r + 1 == rows ? count - r * cols : cols;
    const double tx = x0 + (x1 - x0) * (static_cast<double>(c) + 0.5) / static_cast<double>(in_row);
    const double ty = y0 + (y1 - y0) * (static_cast<double>(r) + 0.5) / static_cast<double>(rows);
    NodeIndex best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (NodeIndex i = 0; i < net.node_count(); ++i) {
      if (used[i]) continue;
      const double d = std::hypot(net.nodes()[i].x_km - tx, net.nodes()[i].y_km - ty);
      if (d < best_d - 1e-12) {
        best_d = d;
        best = i;
      }
    }
    used[best] = 1;
    picked.push_back(best);
  }
  return at_nodes(picked, power_kw, plugs);
}

std::vector<ChargingStation> place_random_incremental(const RoadNetwork& net, std::size_t count,
                                                      std::uint64_t seed, double power_kw, int plugs) {
  check_count(net, count);
  std::vector<NodeIndex> order(net.node_count());
  std::iota(order.begin(), order.end(), 0);
  auto rng = util::stream_rng(seed, {0x57A710u});
  // Explicit Fisher-Yates: std::shuffle's algorithm is implementation-defined.
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  order.resize(count);
  return at_nodes(order, power_kw, plugs);
}

std::vector<ChargingStation> place_concentrated(const RoadNetwork& net, std::size_t count,
                                                double power_kw, int plugs) {
  check_count(net, count);
  std::vector<NodeIndex> order(net.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    const auto& na = net.nodes()[a];
    const auto& nb = net.nodes()[b];
    if (na.y_km != nb.y_km) return na.y_km > nb.y_km;
    return na.x_km < nb.x_km;
  });
  order.resize(count);
  return at_nodes(order, power_kw, plugs);
}

}  // namespace evcap::sim
