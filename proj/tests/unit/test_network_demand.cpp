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


#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "evcap/errors.hpp"
#include "evcap/sim/demand.hpp"
#include "evcap/sim/network.hpp"
#include "evcap/sim/routing.hpp"
#include "evcap/sim/stations.hpp"
#include "gen.hpp"

namespace evcap::sim {
namespace {

using evcap::testing::Gen;

RoadNetwork triangle() {
  // Direct road 0->1 is long but fast; the detour through 2 is short but slow.
  std::vector<Node> nodes{{0, 0, 0}, {1, 10, 0}, {2, 5, 1}};
  std::vector<EdgeSpec> edges{{1, 0, 1, 12.0, 120.0, false},
                              {2, 0, 2, 5.0, 20.0, false},
                              {3, 2, 1, 5.0, 20.0, false}};
  return RoadNetwork::build(nodes, edges);
}

TEST(Network, GridCounts) {
  const auto big = generate_grid_network(10, 400.0);
  EXPECT_EQ(big.node_count(), 121u);
  EXPECT_EQ(big.edges().size(), 2u * 2u * 10u * 11u);
  EXPECT_NEAR(big.area_km2(), 400.0, 1e-9);
  EXPECT_EQ(generate_grid_network(1, 1.0).node_count(), 4u);
  const auto small = generate_grid_network(2, 4.0, 30.0);
  EXPECT_EQ(small.node_count(), 9u);
  EXPECT_NEAR(small.edges()[0].length_km, 1.0, 1e-12);
  EXPECT_EQ(small.edges()[0].speed_kmh, 30.0);
  EXPECT_NEAR(small.nodes()[small.index_of(5)].x_km, 2.0, 1e-12);
  EXPECT_NEAR(small.nodes()[small.index_of(5)].y_km, 1.0, 1e-12);
  EXPECT_THROW(generate_grid_network(0, 1.0), InvalidParameter);
  EXPECT_THROW(generate_grid_network(2, 0.0), InvalidParameter);
}

TEST(Network, BuildErrors) {
  const std::vector<Node> nodes{{1, 0, 0}, {2, 1, 0}};
  EXPECT_THROW(RoadNetwork::build({}, {}), ParseError);
  EXPECT_THROW(RoadNetwork::build({{1, 0, 0}, {1, 1, 0}}, {}), ParseError);
  EXPECT_THROW(RoadNetwork::build(nodes, {{1, 1, 3}}), ParseError);
  EXPECT_THROW(RoadNetwork::build(nodes, {{1, 1, 1}}), ParseError);
  EXPECT_THROW(RoadNetwork::build(nodes, {{1, 1, 2, -1.0}}), ParseError);
  EXPECT_THROW(RoadNetwork::build(nodes, {{1, 1, 2, std::nullopt, 0.0}}), ParseError);
  EXPECT_THROW(RoadNetwork::build(nodes, {{1, 1, 2, std::nullopt, 50.0, true}}), DisconnectedNetwork);
  EXPECT_THROW(RoadNetwork::build(nodes, {{1, 1, 2}}, 0.0), ParseError);

  const auto net = RoadNetwork::build(nodes, {{1, 1, 2}});
  EXPECT_EQ(net.edges().size(), 2u);
  EXPECT_NEAR(net.edges()[0].length_km, 1.0, 1e-12);
  EXPECT_THROW(net.index_of(99), InvalidParameter);
  EXPECT_FALSE(net.find(99));
}

TEST(Network, DisconnectedMessageNamesOrphans) {
  const std::vector<Node> nodes{{1, 0, 0}, {2, 1, 0}, {3, 5, 5}, {4, 6, 5}, {5, 6, 6}};
  try {
    RoadNetwork::build(nodes, {{1, 1, 2}, {2, 3, 4}, {3, 4, 5}});
    FAIL();
  } catch (const DisconnectedNetwork& e) {
    EXPECT_NE(std::string(e.what()).find("[1 2]"), std::string::npos) << e.what();
  }
}

TEST(Network, ParseJson) {
  std::istringstream ok(R"({"nodes": [{"id": 7, "x_km": 0, "y_km": 0}, {"id": 9, "x_km": 3, "y_km": 4}],
                          "edges": [{"id": 1, "from": 7, "to": 9, "speed_kmh": 30}],
                          "area_km2": 12})");
  const auto net = parse_network(ok, "mem");
  EXPECT_EQ(net.node_count(), 2u);
  EXPECT_NEAR(net.edges()[0].length_km, 5.0, 1e-12);
  EXPECT_EQ(net.area_km2(), 12.0);

  std::istringstream bad_json("{nodes: []}");
  EXPECT_THROW(parse_network(bad_json, "mem"), ParseError);
  std::istringstream missing(R"({"nodes": [{"id": 1, "x_km": 0}], "edges": []})");
  EXPECT_THROW(parse_network(missing, "mem"), ParseError);
  std::istringstream oneway(R"({"nodes": [{"id": 1, "x_km": 0, "y_km": 0}, {"id": 2, "x_km": 1, "y_km": 0}],
                              "edges": [{"id": 1, "from": 1, "to": 2, "speed_kmh": 30, "oneway": "yes"}]})");
  EXPECT_THROW(parse_network(oneway, "mem"), ParseError);
  EXPECT_THROW(load_network("/nonexistent/net.json"), ParseError);
}

TEST(Routing, SameNodeAndCorners) {
  const auto net = generate_grid_network(1, 4.0, 60.0);
  const auto self = shortest_path(net, 0, 0, Metric::time);
  EXPECT_TRUE(self.edges.empty());
  ASSERT_EQ(self.nodes.size(), 1u);
  EXPECT_EQ(self.cost, 0.0);

  const auto r = shortest_path(net, net.index_of(0), net.index_of(3), Metric::time);
  EXPECT_NEAR(r.cost, 2.0 * 2.0 / 60.0, 1e-12);
  EXPECT_NEAR(r.length_km, 4.0, 1e-12);
  ASSERT_EQ(r.nodes.size(), 3u);
  EXPECT_EQ(net.nodes()[r.nodes[1]].id, 1);  // ties break toward the smaller node id
  EXPECT_THROW(shortest_path(net, 0, 99, Metric::time), InvalidParameter);
}

TEST(Routing, MetricChangesPath) {
  const auto net = triangle();
  const auto fast = shortest_path(net, 0, 1, Metric::time);
  const auto short_ = shortest_path(net, 0, 1, Metric::distance);
  EXPECT_EQ(fast.edges.size(), 1u);
  EXPECT_NEAR(fast.time_h, 0.1, 1e-12);
  EXPECT_EQ(short_.edges.size(), 2u);
  EXPECT_NEAR(short_.cost, 10.0, 1e-12);
  EXPECT_NEAR(short_.time_h, 0.5, 1e-12);
  EXPECT_EQ(parse_metric("distance"), Metric::distance);
  EXPECT_THROW(parse_metric("hops"), InvalidParameter);
}

TEST(Routing, PropertyRouterAgreesAndTriangleInequality) {
  const auto net = generate_grid_network(6, 36.0);
  Router router(net);
  Gen g(51);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = static_cast<NodeIndex>(g.integer(0, 48));
    const auto b = static_cast<NodeIndex>(g.integer(0, 48));
    const auto c = static_cast<NodeIndex>(g.integer(0, 48));
    const auto m = g.coin() ? Metric::time : Metric::distance;
    const auto r = shortest_path(net, a, b, m);
    ASSERT_NEAR(router.cost(a, b, m), r.cost, 1e-12);
    ASSERT_NEAR(router.route(a, b, m).cost, r.cost, 1e-12);
    ASSERT_NEAR(router.costs_from(a, m)[b], r.cost, 1e-12);
    ASSERT_LE(r.cost, router.cost(a, c, m) + router.cost(c, b, m) + 1e-12);
    // Grid distance is the Manhattan distance.
    const auto& na = net.nodes()[a];
    const auto& nb = net.nodes()[b];
    ASSERT_NEAR(r.length_km, std::abs(na.x_km - nb.x_km) + std::abs(na.y_km - nb.y_km), 1e-9);
  }
}

TEST(Stations, ParseAndErrors) {
  const auto net = generate_grid_network(2, 4.0);
  std::istringstream ok("id,node_id,power_kw,plugs\n10,4,22,2\n11,8,50,1\n");
  const auto s = parse_stations(ok, net, "st.csv");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].node, net.index_of(4));
  EXPECT_EQ(s[0].plugs, 2);
  std::istringstream unknown("id,node_id,power_kw,plugs\n10,44,22,2\n");
  EXPECT_THROW(parse_stations(unknown, net, "st.csv"), ParseError);
  std::istringstream zero("id,node_id,power_kw,plugs\n10,4,0,2\n");
  EXPECT_THROW(parse_stations(zero, net, "st.csv"), ParseError);
  EXPECT_THROW(load_stations("/nonexistent/st.csv", net), ParseError);
}

TEST(Stations, Placements) {
  const auto net = generate_grid_network(10, 400.0);
  const auto uni = place_uniform(net, 10);
  std::set<NodeIndex> nodes;
  for (const auto& s : uni) nodes.insert(s.node);
  EXPECT_EQ(nodes.size(), 10u);

  const auto r5 = place_random_incremental(net, 5, 3);
  const auto r25 = place_random_incremental(net, 25, 3);
  for (std::size_t i = 0; i < r5.size(); ++i) EXPECT_EQ(r5[i].node, r25[i].node);
  EXPECT_NE(place_random_incremental(net, 5, 4)[0].node + place_random_incremental(net, 5, 4)[1].node,
            r5[0].node + r5[1].node);

  const auto conc = place_concentrated(net, 5);
  for (const auto& s : conc) EXPECT_NEAR(net.nodes()[s.node].y_km, 20.0, 1e-9);
  EXPECT_NEAR(net.nodes()[conc[0].node].x_km, 0.0, 1e-9);
  EXPECT_THROW(place_uniform(net, 122), InvalidParameter);
  EXPECT_TRUE(place_uniform(net, 0).empty());
}

TEST(Demand, OneDayIsTwoCommutes) {
  const auto net = generate_grid_network(4, 16.0);
  DemandProfile p;
  p.days = 1;
  p.errand_rate_per_day = 0.0;
  const auto s = generate_demand(net, 3, p, 9);
  ASSERT_EQ(s.size(), 3u);
  for (const auto& a : s) {
    ASSERT_EQ(a.trips.size(), 2u);
    EXPECT_EQ(a.trips[0].origin, a.home);
    EXPECT_EQ(a.trips[0].destination, a.work);
    EXPECT_EQ(a.trips[1].destination, a.home);
    EXPECT_NE(a.home, a.work);
    EXPECT_LT(a.trips[0].depart_s, a.trips[1].depart_s);
  }
}

TEST(Demand, DeterministicAndOrdered) {
  const auto net = generate_grid_network(10, 400.0);
  DemandProfile p;
  p.errand_rate_per_day = 2.0;
  const auto a = generate_demand(net, 20, p, 5);
  const auto b = generate_demand(net, 20, p, 5);
  const auto c = generate_demand(net, 20, p, 6);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].trips.size(), b[i].trips.size());
    for (std::size_t k = 0; k < a[i].trips.size(); ++k) {
      ASSERT_EQ(a[i].trips[k].depart_s, b[i].trips[k].depart_s);
      ASSERT_EQ(a[i].trips[k].destination, b[i].trips[k].destination);
      if (k > 0) ASSERT_GE(a[i].trips[k].depart_s, a[i].trips[k - 1].depart_s);
      ASSERT_NE(a[i].trips[k].origin, a[i].trips[k].destination);
    }
    differs = differs || a[i].home != c[i].home;
  }
  EXPECT_TRUE(differs);
}

TEST(Demand, ErrandCountGrowsWithRate) {
  const auto net = generate_grid_network(10, 400.0);
  DemandProfile lo, hi;
  lo.errand_rate_per_day = 0.5;
  hi.errand_rate_per_day = 3.0;
  const auto a = generate_demand(net, 30, lo, 2);
  const auto b = generate_demand(net, 30, hi, 2);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_LE(a[i].trips.size(), b[i].trips.size());
}

TEST(Demand, CalibrationHitsTargets) {
  const auto net = generate_grid_network(10, 400.0);
  const DemandProfile p;
  const auto c1 = calibrate_demand(net, p, 50, 39.5, 1);
  EXPECT_NEAR(c1.mean_daily_km, 39.5, 0.05 * 39.5);
  const auto c2 = calibrate_demand(net, p, 50, 79.0, 1);
  EXPECT_NEAR(c2.mean_daily_km, 79.0, 0.05 * 79.0);
  EXPECT_GT(c2.profile.errand_rate_per_day, c1.profile.errand_rate_per_day);

  Router router(net);
  const auto sched = generate_demand(net, 50, c2.profile, 1);
  EXPECT_NEAR(mean_daily_distance(router, sched, 7.0), c2.mean_daily_km, 1e-9);

  const auto short_trips = calibrate_demand(net, p, 50, 8.0, 1);
  EXPECT_NEAR(short_trips.mean_daily_km, 8.0, 0.4);
  EXPECT_EQ(short_trips.profile.errand_rate_per_day, 0.0);
  EXPECT_GT(short_trips.profile.commute_radius_km, 0.0);

  EXPECT_THROW(calibrate_demand(net, p, 50, 5000.0, 1), CalibrationFailed);
  EXPECT_THROW(calibrate_demand(net, p, 50, 0.0, 1), InvalidParameter);
}

TEST(Demand, ProfileErrors) {
  const auto net = generate_grid_network(2, 4.0);
  DemandProfile p;
  p.days = 0;
  EXPECT_THROW(generate_demand(net, 1, p, 1), InvalidParameter);
  p = {};
  p.morning_depart_h = 19;
  EXPECT_THROW(generate_demand(net, 1, p, 1), InvalidParameter);
  p = {};
  p.errand_rate_per_day = -1;
  EXPECT_THROW(generate_demand(net, 1, p, 1), InvalidParameter);
  EXPECT_THROW(generate_demand(net, 0, DemandProfile{}, 1), InvalidParameter);
}

TEST(Demand, TripsCsv) {
  const auto net = generate_grid_network(2, 4.0);
  std::istringstream ok("ev_id,depart_s,origin,destination\n7,100,0,8\n3,50,1,2\n7,900,8,0\n");
  const auto s = parse_trips(ok, net, "trips.csv");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].ev_id, 3);
  EXPECT_EQ(s[1].trips.size(), 2u);
  EXPECT_EQ(s[1].trips[1].origin, net.index_of(8));

  auto fails = [&](const char* text) {
    std::istringstream in(text);
    EXPECT_THROW(parse_trips(in, net, "trips.csv"), ParseError) << text;
  };
  fails("ev_id,depart_s,origin,destination\n1,0,0,99\n");
  fails("ev_id,depart_s,origin,destination\n1,0,4,4\n");
  fails("ev_id,depart_s,origin,destination\n1,-5,0,4\n");
  fails("ev_id,depart_s,origin,destination\n1,50,0,4\n1,10,4,0\n");
  fails("ev_id,depart_s,origin,destination\n");
  EXPECT_THROW(load_trips("/nonexistent/trips.csv", net), ParseError);
}

}  // namespace
}  // namespace evcap::sim
