#include "fttc/routing.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace fttc {

namespace {

// id-sorted insertion keeps neighbor lists deterministic (kBaseVertex sorts first)
void insert_edge(std::vector<RadioGraph::Edge>& edges, int to, double length) {
  auto it = std::lower_bound(edges.begin(), edges.end(), to,
                             [](const RadioGraph::Edge& e, int id) { return e.to < id; });
  if (it != edges.end() && it->to == to)
    throw std::invalid_argument("RadioGraph: duplicate edge");
  edges.insert(it, RadioGraph::Edge{to, length});
}

}  // namespace

std::size_t RadioGraph::index_of(int node_id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), node_id);
  if (it == ids_.end() || *it != node_id)
    throw std::invalid_argument("RadioGraph: unknown vertex id");
  return static_cast<std::size_t>(it - ids_.begin());
}

void RadioGraph::add_vertex(int node_id, const Position& pos) {
  if (node_id == kBaseVertex) throw std::invalid_argument("RadioGraph: reserved vertex id");
  auto it = std::lower_bound(ids_.begin(), ids_.end(), node_id);
  if (it != ids_.end() && *it == node_id)
    throw std::invalid_argument("RadioGraph: duplicate vertex id");
  const auto at = static_cast<std::size_t>(it - ids_.begin());
  ids_.insert(it, node_id);
  pos_.insert(pos_.begin() + static_cast<std::ptrdiff_t>(at), pos);
  adj_.emplace(adj_.begin() + static_cast<std::ptrdiff_t>(at));
}

void RadioGraph::add_edge(int a, int b) {
  if (a == b) throw std::invalid_argument("RadioGraph: self edge");
  const auto ia = index_of(a);
  const auto ib = index_of(b);
  const double length = (pos_[ia] - pos_[ib]).norm();
  insert_edge(adj_[ia], b, length);
  insert_edge(adj_[ib], a, length);
}

void RadioGraph::add_base_edge(int node_id) {
  const auto i = index_of(node_id);
  insert_edge(adj_[i], kBaseVertex, (pos_[i] - base_pos_).norm());
}

bool RadioGraph::has_vertex(int node_id) const {
  return std::binary_search(ids_.begin(), ids_.end(), node_id);
}

const Position& RadioGraph::position(int node_id) const {
  if (node_id == kBaseVertex) return base_pos_;
  return pos_[index_of(node_id)];
}

const std::vector<RadioGraph::Edge>& RadioGraph::neighbors(int node_id) const {
  return adj_[index_of(node_id)];
}

std::vector<int> RadioGraph::base_neighbors() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < ids_.size(); ++i)
    for (const Edge& e : adj_[i])
      if (e.to == kBaseVertex) {
        out.push_back(ids_[i]);
        break;
      }
  return out;
}

RadioGraph build_graph(const std::vector<SensorNode>& nodes, const Position& base,
                       double comm_range, double base_range) {
  if (nodes.empty()) throw std::invalid_argument("build_graph: no nodes");
  RadioGraph g(base);
  std::vector<const SensorNode*> alive;
  for (const SensorNode& n : nodes)
    if (n.alive) {
      g.add_vertex(n.id, n.pos);
      alive.push_back(&n);
    }
  for (std::size_t i = 0; i < alive.size(); ++i) {
    for (std::size_t j = i + 1; j < alive.size(); ++j)
      if ((alive[i]->pos - alive[j]->pos).norm() <= comm_range)
        g.add_edge(alive[i]->id, alive[j]->id);
    if ((alive[i]->pos - base).norm() <= base_range) g.add_base_edge(alive[i]->id);
  }
  return g;
}

namespace {

// Composite path key: cost, then hop count, then the node-id sequence.
// Comparisons use the stored forward-sum costs directly, so exact cost ties
// (coincident nodes, mirrored layouts) resolve the same way everywhere.
struct VertexLabel {
  double dist = std::numeric_limits<double>::infinity();
  int hops = 0;
  std::vector<int> path;  // node ids from the source; the base terminus stays implicit
  bool visited = false;
};

bool label_less(double da, int ha, const std::vector<int>& pa, double db, int hb,
                const std::vector<int>& pb) {
  if (da != db) return da < db;
  if (ha != hb) return ha < hb;
  return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
}

}  // namespace

std::optional<Trajectory> shortest_path(const RadioGraph& graph, int source) {
  if (!graph.has_vertex(source)) throw std::invalid_argument("shortest_path: unknown source");
  const std::vector<int>& ids = graph.ids();
  const std::size_t n = ids.size();
  const std::size_t base = n;  // virtual slot for the base vertex
  std::vector<VertexLabel> labels(n + 1);

  auto slot = [&](int id) -> std::size_t {
    if (id == RadioGraph::kBaseVertex) return base;
    return static_cast<std::size_t>(
        std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  const std::size_t src = slot(source);
  labels[src].dist = 0.0;
  labels[src].path = {source};

  for (;;) {
    std::size_t u = n + 1;
    for (std::size_t v = 0; v <= n; ++v) {
      if (labels[v].visited || labels[v].path.empty()) continue;
      if (u > n || label_less(labels[v].dist, labels[v].hops, labels[v].path,
                              labels[u].dist, labels[u].hops, labels[u].path))
        u = v;
    }
    if (u > n) break;
    labels[u].visited = true;
    if (u == base) continue;  // the base is a sink, never a relay

    for (const RadioGraph::Edge& e : graph.neighbors(ids[u])) {
      const std::size_t v = slot(e.to);
      if (labels[v].visited) continue;
      const double nd = labels[u].dist + e.length;
      const int nh = labels[u].hops + 1;
      VertexLabel& lv = labels[v];
      if (!lv.path.empty()) {
        // settle cost and hops first; build the candidate path only on a full tie
        if (nd > lv.dist || (nd == lv.dist && nh > lv.hops)) continue;
        if (nd == lv.dist && nh == lv.hops) {
          std::vector<int> cand = labels[u].path;
          if (v != base) cand.push_back(e.to);
          if (!label_less(nd, nh, cand, lv.dist, lv.hops, lv.path)) continue;
          lv.path = std::move(cand);
          continue;
        }
      }
      lv.dist = nd;
      lv.hops = nh;
      lv.path = labels[u].path;
      if (v != base) lv.path.push_back(e.to);
    }
  }

  if (labels[base].path.empty()) return std::nullopt;
  Trajectory t;
  t.t_id = source;
  t.node_path = labels[base].path;
  t.point_path.reserve(t.node_path.size());
  for (int id : t.node_path) t.point_path.push_back(graph.position(id));
  t.total_cost_m = labels[base].dist;
  return t;
}

TrajectoryField all_trajectories(const RadioGraph& graph) {
  TrajectoryField field;
  for (int id : graph.ids()) {
    if (auto t = shortest_path(graph, id))
      field.trajectories.push_back(std::move(*t));
    else
      field.unreachable.push_back(id);
  }
  return field;
}

}  // namespace fttc
