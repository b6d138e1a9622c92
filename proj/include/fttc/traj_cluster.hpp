#pragma once

#include "fttc/energy.hpp"
#include "fttc/net_model.hpp"
#include "fttc/routing.hpp"

#include <Eigen/Dense>

#include <map>
#include <vector>

namespace fttc {

// Trajectory dissimilarity (meters): min point distance, directed mean, and
// the symmetric max of the two directions. Distances are between trajectory
// vertices; segment interiors never enter.
double point_to_traj(const Position& p, const Trajectory& t);
double one_way(const Trajectory& t1, const Trajectory& t2);
double traj_dist(const Trajectory& t1, const Trajectory& t2);

struct DissimilarityMatrix {
  Eigen::MatrixXd d;  // symmetric, zero diagonal
  int n() const { return static_cast<int>(d.rows()); }
};

DissimilarityMatrix build_matrix(const std::vector<Trajectory>& trajs);

// Clusters hold row indices of the matrix (= positions in the trajectory
// sequence it was built from), not node ids.
struct ClusterPlan {
  std::vector<std::vector<int>> clusters;  // each ascending; ordered by seed/medoid
  std::vector<int> representatives;        // one medoid per cluster; empty until chosen
  double threshold = 0.0;
};

// Sequential leader pass: the lowest unclassified index seeds each new cluster
// and collects every unclassified trajectory within threshold of the seed.
ClusterPlan init_clusters(const DissimilarityMatrix& m, double threshold);

// Medoid: member with minimum cumulative dissimilarity, lowest index on ties.
int rep_traj(const std::vector<int>& cluster, const DissimilarityMatrix& m);

struct ReclusterResult {
  ClusterPlan plan;
  int iterations = 0;
  bool hit_cap = false;                 // stopped by the iteration cap, not the fixpoint
  double objective = 0.0;               // total within-cluster cumulative dissimilarity
  std::vector<double> objective_trace;  // objective after each sweep; non-increasing
};

// Alternates nearest-representative assignment with medoid refresh until the
// representative set repeats (k-medoids style), capped at 100 sweeps.
ReclusterResult recluster(const DissimilarityMatrix& m, std::vector<int> initial_reps);

struct ThresholdSearch {
  double threshold = 0.0;
  ClusterPlan plan;  // medoids filled in
};

// Picks the init_clusters threshold whose cluster count lands closest to
// target_k; the smaller threshold wins ties.
ThresholdSearch tune_threshold(const DissimilarityMatrix& m, int target_k);

// One standby head set. Counts include the head itself; the lifetime estimate
// is the weakest head's floor(residual / analytical per-round head cost).
struct PriorityPlan {
  int rank = 0;
  std::vector<int> head_node_ids;  // sorted, alive at plan time
  std::map<int, int> members_per_head;
  double expected_lifetime_rounds = 0.0;
};

struct PlanEnergyContext {
  Position base{0.0, 0.0};
  double message_bits = 0.0;
  EnergyParams energy;
};

// Nearest-head membership shared by plan ranking and the round loop: alive
// nodes map to the closest head id (ties to the lower id), heads map to
// themselves, dead nodes to -1. Result is indexed like `nodes`.
std::vector<int> assign_members(const std::vector<SensorNode>& nodes,
                                const std::vector<int>& head_ids);

// Plan sheet for one head set (used for every rank, and by the engine for
// degenerate single-set plans).
PriorityPlan plan_for_heads(int rank, std::vector<int> head_ids,
                            const std::vector<SensorNode>& nodes,
                            const PlanEnergyContext& ctx);

// Ranked standby plans: rank r takes each cluster's r-th most central
// trajectory (a cluster that runs out reuses its last one); the rank's head
// set is every node on the chosen trajectories.
std::vector<PriorityPlan> fault_tolerant_plans(const ClusterPlan& plan,
                                               const DissimilarityMatrix& m,
                                               const std::vector<Trajectory>& trajs,
                                               int p, const std::vector<SensorNode>& nodes,
                                               const PlanEnergyContext& ctx);

}  // namespace fttc
