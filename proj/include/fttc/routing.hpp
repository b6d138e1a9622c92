#pragma once

#include "fttc/net_model.hpp"

#include <optional>
#include <vector>

namespace fttc {

// Hello-phase connectivity: one vertex per alive node plus the base station.
// Edges carry Euclidean length in meters; nodes pair up within comm_range and
// reach the base within base_range. The base never relays, so it keeps no
// outgoing adjacency of its own.
class RadioGraph {
 public:
  static constexpr int kBaseVertex = -1;

  struct Edge {
    int to = 0;  // node id, or kBaseVertex for the uplink edge
    double length = 0.0;
  };

  explicit RadioGraph(const Position& base_pos) : base_pos_(base_pos) {}

  void add_vertex(int node_id, const Position& pos);
  void add_edge(int a, int b);        // undirected; length from stored positions
  void add_base_edge(int node_id);

  const std::vector<int>& ids() const { return ids_; }  // ascending
  bool has_vertex(int node_id) const;
  // node position, or the base position for kBaseVertex
  const Position& position(int node_id) const;
  // edges of a node, sorted by target id (base edge first when present)
  const std::vector<Edge>& neighbors(int node_id) const;
  // node ids adjacent to the base, ascending
  std::vector<int> base_neighbors() const;

 private:
  std::size_t index_of(int node_id) const;

  Position base_pos_;
  std::vector<int> ids_;
  std::vector<Position> pos_;
  std::vector<std::vector<Edge>> adj_;
};

// Graph over the alive nodes only.
RadioGraph build_graph(const std::vector<SensorNode>& nodes, const Position& base,
                       double comm_range, double base_range);

// A node's hello path to the base. The base terminus is implicit: node_path
// holds node ids only, total_cost_m includes the final hop to the base.
struct Trajectory {
  int t_id = -1;                     // source node id
  std::vector<int> node_path;        // source first
  std::vector<Position> point_path;  // positions of node_path
  double total_cost_m = 0.0;
};

// Cheapest simple path from source to the base; cost ties broken by fewer
// hops, then the lexicographically smallest node-id sequence. Empty when the
// source cannot reach the base at all.
std::optional<Trajectory> shortest_path(const RadioGraph& graph, int source);

struct TrajectoryField {
  std::vector<Trajectory> trajectories;  // ascending t_id
  std::vector<int> unreachable;          // ascending node id
};

TrajectoryField all_trajectories(const RadioGraph& graph);

}  // namespace fttc
