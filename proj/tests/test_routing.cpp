#include "fttc/routing.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include "fttc/net_model.hpp"

#include <algorithm>
#include <stdexcept>

using namespace fttc;

namespace {

SensorNode node_at(int id, double x, double y) {
  SensorNode n;
  n.id = id;
  n.pos = Position(x, y);
  n.residual_j = 2.0;
  return n;
}

// random geometric instance small enough for exhaustive path enumeration
std::vector<SensorNode> random_nodes(Rng& rng, int count, double side) {
  std::vector<SensorNode> nodes;
  for (int i = 0; i < count; ++i)
    nodes.push_back(node_at(i, rng.uniform(0.0, side), rng.uniform(0.0, side)));
  return nodes;
}

}  // namespace

TEST_CASE("edges exist exactly within the hop radius") {
  std::vector<SensorNode> nodes{node_at(0, 0, 0), node_at(1, 0, 10), node_at(2, 0, 40)};
  const RadioGraph g = build_graph(nodes, Position(500, 500), 25.0, 120.0);

  REQUIRE(g.neighbors(0).size() == 1);
  CHECK(g.neighbors(0)[0].to == 1);
  CHECK(g.neighbors(0)[0].length == 10.0);
  CHECK(g.neighbors(2).empty());  // 30 m to node 1, outside the radius
}

TEST_CASE("the radius boundary is inclusive") {
  std::vector<SensorNode> nodes{node_at(0, 0, 0), node_at(1, 3, 4)};
  const RadioGraph g = build_graph(nodes, Position(500, 500), 5.0, 120.0);
  REQUIRE(g.neighbors(0).size() == 1);
  CHECK(g.neighbors(0)[0].length == 5.0);
}

TEST_CASE("dead nodes stay out of the graph") {
  std::vector<SensorNode> nodes{node_at(0, 0, 0), node_at(1, 0, 10)};
  nodes[1].alive = false;
  const RadioGraph g = build_graph(nodes, Position(0, 50), 25.0, 120.0);
  CHECK(g.has_vertex(0));
  CHECK_FALSE(g.has_vertex(1));
  CHECK(g.neighbors(0).empty() == false);  // still has its base edge
  CHECK(g.neighbors(0)[0].to == RadioGraph::kBaseVertex);
}

TEST_CASE("node and base edges use their own radii") {
  // node 1 pairs with node 0 but sits beyond the base radius
  std::vector<SensorNode> nodes{node_at(0, 0, 10), node_at(1, 0, 30)};
  const RadioGraph g = build_graph(nodes, Position(0, 0), 25.0, 15.0);
  const auto reach = g.base_neighbors();
  REQUIRE(reach.size() == 1);
  CHECK(reach[0] == 0);
}

TEST_CASE("adjacency is mirrored with equal lengths") {
  Rng rng(17);
  auto nodes = random_nodes(rng, 8, 60.0);
  const RadioGraph g = build_graph(nodes, Position(30, 120), 25.0, 80.0);
  for (int u : g.ids()) {
    for (const auto& e : g.neighbors(u)) {
      if (e.to == RadioGraph::kBaseVertex) continue;
      const auto& back = g.neighbors(e.to);
      const auto it = std::find_if(back.begin(), back.end(),
                                   [&](const RadioGraph::Edge& b) { return b.to == u; });
      REQUIRE(it != back.end());
      CHECK(it->length == e.length);
    }
  }
}

TEST_CASE("graph construction rejects self edges and duplicates") {
  RadioGraph g(Position(0, 0));
  g.add_vertex(1, Position(0, 10));
  g.add_vertex(2, Position(0, 20));
  g.add_edge(1, 2);
  CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(2, 1), std::invalid_argument);
  CHECK_THROWS_AS(g.add_vertex(1, Position(5, 5)), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(1, 7), std::invalid_argument);
}

TEST_CASE("single hop straight to the base") {
  std::vector<SensorNode> nodes{node_at(4, 0, 20)};
  const RadioGraph g = build_graph(nodes, Position(0, 0), 25.0, 25.0);
  const auto t = shortest_path(g, 4);
  REQUIRE(t.has_value());
  CHECK(t->t_id == 4);
  CHECK(t->node_path == std::vector<int>{4});
  CHECK(t->total_cost_m == 20.0);
  REQUIRE(t->point_path.size() == 1);
  CHECK(t->point_path[0].y() == 20.0);
}

TEST_CASE("relaying wins when the direct uplink is out of range") {
  // chain 10+10 vs no direct edge for the far node
  std::vector<SensorNode> nodes{node_at(0, 0, 20), node_at(1, 0, 10)};
  const RadioGraph g = build_graph(nodes, Position(0, 0), 12.0, 15.0);
  const auto t = shortest_path(g, 0);
  REQUIRE(t.has_value());
  CHECK(t->node_path == std::vector<int>{0, 1});
  CHECK(t->total_cost_m == 20.0);
}

TEST_CASE("equal-cost routes prefer fewer hops") {
  // direct 20 m vs collinear relay 10+10: same length, one hop beats two
  std::vector<SensorNode> nodes{node_at(0, 0, 20), node_at(1, 0, 10)};
  const RadioGraph g = build_graph(nodes, Position(0, 0), 12.0, 25.0);
  const auto t = shortest_path(g, 0);
  REQUIRE(t.has_value());
  CHECK(t->node_path == std::vector<int>{0});
}

TEST_CASE("remaining ties pick the lexicographically smallest id sequence") {
  // coincident relays: both routes cost 10+10 in two hops
  std::vector<SensorNode> nodes{node_at(0, 0, 20), node_at(1, 0, 10), node_at(2, 0, 10)};
  const RadioGraph g = build_graph(nodes, Position(0, 0), 12.0, 11.0);
  const auto t = shortest_path(g, 0);
  REQUIRE(t.has_value());
  CHECK(t->node_path == std::vector<int>{0, 1});
}

TEST_CASE("zero-length edges between coincident nodes are survivable") {
  std::vector<SensorNode> nodes{node_at(0, 0, 10), node_at(1, 0, 10)};
  const RadioGraph g = build_graph(nodes, Position(0, 0), 25.0, 25.0);
  const auto t = shortest_path(g, 0);
  REQUIRE(t.has_value());
  CHECK(t->node_path == std::vector<int>{0});  // direct beats looping through the twin
  CHECK(t->total_cost_m == 10.0);
}

TEST_CASE("a node cut off from everything is unreachable") {
  std::vector<SensorNode> nodes{node_at(0, 0, 10), node_at(1, 0, 55)};
  const RadioGraph g = build_graph(nodes, Position(0, 30), 25.0, 20.0);
  // node 1: 25 m to the base (outside 20), 45 m to node 0 (outside 25)
  CHECK(shortest_path(g, 0).has_value());
  CHECK_FALSE(shortest_path(g, 1).has_value());
  CHECK_THROWS_AS(shortest_path(g, 9), std::invalid_argument);
}

TEST_CASE("trajectory listing covers reachable nodes in id order") {
  std::vector<SensorNode> nodes{node_at(0, 0, 10), node_at(1, 0, 20), node_at(2, 0, 30),
                                node_at(3, 90, 90)};
  const RadioGraph g = build_graph(nodes, Position(0, 0), 12.0, 12.0);
  const auto field = all_trajectories(g);
  REQUIRE(field.trajectories.size() == 3);
  CHECK(field.trajectories[0].t_id == 0);
  CHECK(field.trajectories[1].t_id == 1);
  CHECK(field.trajectories[2].t_id == 2);
  CHECK(field.unreachable == std::vector<int>{3});

  SUBCASE("listing twice is identical") {
    const auto again = all_trajectories(g);
    REQUIRE(again.trajectories.size() == field.trajectories.size());
    for (std::size_t i = 0; i < again.trajectories.size(); ++i) {
      CHECK(again.trajectories[i].node_path == field.trajectories[i].node_path);
      CHECK(again.trajectories[i].total_cost_m == field.trajectories[i].total_cost_m);
    }
  }
}

TEST_CASE("search equals exhaustive enumeration on random geometric graphs") {
  Rng rng(404);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(7));
    auto nodes = random_nodes(rng, n, 50.0);
    const RadioGraph g = build_graph(nodes, Position(25.0, 75.0), 30.0, 45.0);
    for (int id : g.ids()) {
      const auto got = shortest_path(g, id);
      const auto want = oracle::enum_shortest_path(g, id);
      REQUIRE(got.has_value() == want.has_value());
      if (!got) continue;
      CHECK(got->total_cost_m == want->cost);
      CHECK(got->node_path == want->nodes);
    }
  }
}

TEST_CASE("every suffix of a shortest path is itself shortest") {
  Rng rng(808);
  for (int trial = 0; trial < 25; ++trial) {
    auto nodes = random_nodes(rng, 8, 60.0);
    const RadioGraph g = build_graph(nodes, Position(30.0, 90.0), 30.0, 50.0);
    for (int id : g.ids()) {
      const auto t = shortest_path(g, id);
      if (!t) continue;
      for (std::size_t k = 1; k < t->node_path.size(); ++k) {
        const auto sub = shortest_path(g, t->node_path[k]);
        REQUIRE(sub.has_value());
        const std::vector<int> suffix(t->node_path.begin() + static_cast<std::ptrdiff_t>(k),
                                      t->node_path.end());
        CHECK(sub->node_path == suffix);
      }
    }
  }
}

TEST_CASE("total cost equals the sum of hop lengths plus the final uplink") {
  Rng rng(55);
  auto nodes = random_nodes(rng, 8, 40.0);
  const RadioGraph g = build_graph(nodes, Position(20.0, 70.0), 30.0, 45.0);
  for (int id : g.ids()) {
    const auto t = shortest_path(g, id);
    if (!t) continue;
    double sum = 0.0;
    for (std::size_t i = 1; i < t->node_path.size(); ++i)
      sum += (g.position(t->node_path[i]) - g.position(t->node_path[i - 1])).norm();
    sum += (g.position(t->node_path.back()) - g.position(RadioGraph::kBaseVertex)).norm();
    CHECK(t->total_cost_m == doctest::Approx(sum).epsilon(1e-12));
  }
}
