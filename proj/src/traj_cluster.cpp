#include "fttc/traj_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fttc {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double cumulative(int i, const std::vector<int>& cluster, const DissimilarityMatrix& m) {
  double sum = 0.0;
  for (int j : cluster) sum += m.d(i, j);
  return sum;
}

int count_clusters(const DissimilarityMatrix& m, double threshold) {
  const int n = m.n();
  std::vector<char> classified(static_cast<std::size_t>(n), 0);
  int k = 0;
  for (int seed = 0; seed < n; ++seed) {
    if (classified[static_cast<std::size_t>(seed)]) continue;
    ++k;
    for (int i = seed; i < n; ++i)
      if (!classified[static_cast<std::size_t>(i)] && m.d(seed, i) <= threshold)
        classified[static_cast<std::size_t>(i)] = 1;
  }
  return k;
}

}  // namespace

double point_to_traj(const Position& p, const Trajectory& t) {
  require(!t.point_path.empty(), "point_to_traj: empty trajectory");
  double best = std::numeric_limits<double>::infinity();
  for (const Position& q : t.point_path) best = std::min(best, (p - q).norm());
  return best;
}

double one_way(const Trajectory& t1, const Trajectory& t2) {
  require(!t1.point_path.empty() && !t2.point_path.empty(), "one_way: empty trajectory");
  double sum = 0.0;
  for (const Position& p : t1.point_path) sum += point_to_traj(p, t2);
  return sum / static_cast<double>(t1.point_path.size());
}

double traj_dist(const Trajectory& t1, const Trajectory& t2) {
  return std::max(one_way(t1, t2), one_way(t2, t1));
}

DissimilarityMatrix build_matrix(const std::vector<Trajectory>& trajs) {
  require(!trajs.empty(), "build_matrix: no trajectories");
  const int n = static_cast<int>(trajs.size());
  DissimilarityMatrix m;
  m.d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = traj_dist(trajs[static_cast<std::size_t>(i)],
                                 trajs[static_cast<std::size_t>(j)]);
      m.d(i, j) = d;
      m.d(j, i) = d;
    }
  return m;
}

ClusterPlan init_clusters(const DissimilarityMatrix& m, double threshold) {
  require(threshold >= 0.0, "init_clusters: threshold must be >= 0");  // rejects NaN too
  const int n = m.n();
  ClusterPlan plan;
  plan.threshold = threshold;
  std::vector<char> classified(static_cast<std::size_t>(n), 0);
  for (int seed = 0; seed < n; ++seed) {
    if (classified[static_cast<std::size_t>(seed)]) continue;
    std::vector<int> cluster;
    for (int i = seed; i < n; ++i)
      if (!classified[static_cast<std::size_t>(i)] && m.d(seed, i) <= threshold) {
        classified[static_cast<std::size_t>(i)] = 1;
        cluster.push_back(i);
      }
    plan.clusters.push_back(std::move(cluster));
  }
  return plan;
}

int rep_traj(const std::vector<int>& cluster, const DissimilarityMatrix& m) {
  require(!cluster.empty(), "rep_traj: empty cluster");
  int best = cluster.front();
  double best_sum = cumulative(best, cluster, m);
  for (std::size_t k = 1; k < cluster.size(); ++k) {
    const int i = cluster[k];
    const double sum = cumulative(i, cluster, m);
    if (sum < best_sum || (sum == best_sum && i < best)) {
      best = i;
      best_sum = sum;
    }
  }
  return best;
}

ReclusterResult recluster(const DissimilarityMatrix& m, std::vector<int> initial_reps) {
  require(!initial_reps.empty(), "recluster: no representatives");
  std::sort(initial_reps.begin(), initial_reps.end());
  require(std::adjacent_find(initial_reps.begin(), initial_reps.end()) == initial_reps.end(),
          "recluster: duplicate representative");
  for (int r : initial_reps)
    require(r >= 0 && r < m.n(), "recluster: representative out of range");

  constexpr int kMaxIterations = 100;
  ReclusterResult out;
  std::vector<int> reps = std::move(initial_reps);

  // nearest representative, lowest rep index on ties; drops the empty cluster a
  // duplicate trajectory can leave behind a later representative
  auto assign = [&m](const std::vector<int>& to) {
    std::vector<std::vector<int>> clusters(to.size());
    for (int i = 0; i < m.n(); ++i) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < to.size(); ++c)
        if (m.d(i, to[c]) < m.d(i, to[best])) best = c;
      clusters[best].push_back(i);
    }
    std::erase_if(clusters, [](const std::vector<int>& c) { return c.empty(); });
    return clusters;
  };
  auto sweep_objective = [&m](const std::vector<std::vector<int>>& clusters,
                              const std::vector<int>& medoids) {
    double sum = 0.0;
    for (std::size_t c = 0; c < clusters.size(); ++c)
      sum += cumulative(medoids[c], clusters[c], m);
    return sum;
  };

  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    out.iterations = iter;
    std::vector<std::vector<int>> clusters = assign(reps);
    std::vector<int> next;
    next.reserve(clusters.size());
    for (const auto& c : clusters) next.push_back(rep_traj(c, m));
    out.objective_trace.push_back(sweep_objective(clusters, next));
    std::sort(next.begin(), next.end());

    if (next == reps) {
      out.plan.clusters = std::move(clusters);
      out.plan.representatives = std::move(next);
      break;
    }
    reps = std::move(next);
    if (iter == kMaxIterations) {
      out.hit_cap = true;
      out.plan.clusters = assign(reps);
      out.plan.representatives = reps;
    }
  }
  out.objective = sweep_objective(out.plan.clusters, out.plan.representatives);
  return out;
}

ThresholdSearch tune_threshold(const DissimilarityMatrix& m, int target_k) {
  require(target_k >= 1 && target_k <= m.n(), "tune_threshold: target out of range");
  const double max_entry = m.d.maxCoeff();

  double best_thr = max_entry;
  int best_gap = std::numeric_limits<int>::max();
  auto consider = [&](double thr) {
    const int gap = std::abs(count_clusters(m, thr) - target_k);
    if (gap < best_gap || (gap == best_gap && thr < best_thr)) {
      best_gap = gap;
      best_thr = thr;
    }
  };

  consider(0.0);
  consider(max_entry);
  // converges onto the lower edge of the target's threshold band; tracking the
  // best probe along the way also covers non-monotone counts
  double lo = 0.0, hi = max_entry;
  for (int iter = 0; iter < 64; ++iter) {
    const double mid = 0.5 * (lo + hi);
    consider(mid);
    if (count_clusters(m, mid) > target_k)
      lo = mid;  // too fine, widen
    else
      hi = mid;
  }

  ThresholdSearch out;
  out.threshold = best_thr;
  out.plan = init_clusters(m, best_thr);
  out.plan.representatives.reserve(out.plan.clusters.size());
  for (const auto& c : out.plan.clusters) out.plan.representatives.push_back(rep_traj(c, m));
  return out;
}

std::vector<int> assign_members(const std::vector<SensorNode>& nodes,
                                const std::vector<int>& head_ids) {
  require(!head_ids.empty(), "assign_members: no heads");
  std::vector<const SensorNode*> heads;
  heads.reserve(head_ids.size());
  std::vector<int> sorted_heads = head_ids;
  std::sort(sorted_heads.begin(), sorted_heads.end());
  for (int h : sorted_heads) {
    const SensorNode* found = nullptr;
    for (const SensorNode& n : nodes)
      if (n.id == h) {
        found = &n;
        break;
      }
    require(found != nullptr, "assign_members: head id not among nodes");
    require(found->alive, "assign_members: dead head");
    heads.push_back(found);
  }

  std::vector<int> map(nodes.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const SensorNode& n = nodes[i];
    if (!n.alive) continue;
    if (std::binary_search(sorted_heads.begin(), sorted_heads.end(), n.id)) {
      map[i] = n.id;
      continue;
    }
    const SensorNode* best = heads.front();
    double best_d = (n.pos - best->pos).norm();
    for (std::size_t h = 1; h < heads.size(); ++h) {
      const double d = (n.pos - heads[h]->pos).norm();
      if (d < best_d) {  // heads are id-ascending, so ties keep the lower id
        best = heads[h];
        best_d = d;
      }
    }
    map[i] = best->id;
  }
  return map;
}

PriorityPlan plan_for_heads(int rank, std::vector<int> head_ids,
                            const std::vector<SensorNode>& nodes,
                            const PlanEnergyContext& ctx) {
  PriorityPlan plan;
  plan.rank = rank;
  std::sort(head_ids.begin(), head_ids.end());
  head_ids.erase(std::unique(head_ids.begin(), head_ids.end()), head_ids.end());
  plan.head_node_ids = std::move(head_ids);

  const std::vector<int> map = assign_members(nodes, plan.head_node_ids);
  for (int h : plan.head_node_ids) plan.members_per_head[h] = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (map[i] >= 0) ++plan.members_per_head[map[i]];

  double weakest = std::numeric_limits<double>::infinity();
  for (int h : plan.head_node_ids) {
    const SensorNode* node = nullptr;
    for (const SensorNode& n : nodes)
      if (n.id == h) {
        node = &n;
        break;
      }
    const double cost = head_round_energy(ctx.message_bits,
                                          static_cast<double>(plan.members_per_head[h]),
                                          (node->pos - ctx.base).norm(), ctx.energy);
    weakest = std::min(weakest, std::floor(node->residual_j / cost));
  }
  plan.expected_lifetime_rounds = weakest;
  return plan;
}

std::vector<PriorityPlan> fault_tolerant_plans(const ClusterPlan& plan,
                                               const DissimilarityMatrix& m,
                                               const std::vector<Trajectory>& trajs,
                                               int p, const std::vector<SensorNode>& nodes,
                                               const PlanEnergyContext& ctx) {
  require(p >= 1, "fault_tolerant_plans: need p >= 1");
  require(plan.representatives.size() == plan.clusters.size(),
          "fault_tolerant_plans: plan is missing its medoids");
  require(static_cast<int>(trajs.size()) == m.n(),
          "fault_tolerant_plans: trajectory/matrix size mismatch");

  // per cluster: members ordered by centrality (cumulative dissimilarity, then index)
  std::vector<std::vector<int>> ordered(plan.clusters.size());
  for (std::size_t c = 0; c < plan.clusters.size(); ++c) {
    ordered[c] = plan.clusters[c];
    std::vector<double> sums(ordered[c].size());
    for (std::size_t k = 0; k < ordered[c].size(); ++k)
      sums[k] = cumulative(ordered[c][k], plan.clusters[c], m);
    std::vector<std::size_t> by(ordered[c].size());
    for (std::size_t k = 0; k < by.size(); ++k) by[k] = k;
    std::sort(by.begin(), by.end(), [&](std::size_t a, std::size_t b) {
      if (sums[a] != sums[b]) return sums[a] < sums[b];
      return ordered[c][a] < ordered[c][b];
    });
    std::vector<int> sorted(ordered[c].size());
    for (std::size_t k = 0; k < by.size(); ++k) sorted[k] = ordered[c][by[k]];
    ordered[c] = std::move(sorted);
  }

  std::vector<PriorityPlan> plans;
  plans.reserve(static_cast<std::size_t>(p));
  for (int rank = 1; rank <= p; ++rank) {
    std::vector<int> heads;
    for (const auto& members : ordered) {
      const std::size_t pick = std::min<std::size_t>(static_cast<std::size_t>(rank),
                                                     members.size()) - 1;
      const Trajectory& t = trajs[static_cast<std::size_t>(members[pick])];
      heads.insert(heads.end(), t.node_path.begin(), t.node_path.end());
    }
    plans.push_back(plan_for_heads(rank, std::move(heads), nodes, ctx));
  }
  return plans;
}

}  // namespace fttc
