#pragma once

#include "fttc/traj_cluster.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fttc {

enum class Protocol { Fttc, Baseline };

struct SimConfig {
  NetworkConfig net;
  EnergyParams energy;
};

// Engine switches that are not part of the protocol contract. Disabling
// rotation (or stretching the handover) exists for controlled experiments;
// both default to the protocol as specified.
struct SimOptions {
  bool rotation_enabled = true;
  int rotation_handover_rounds = 0;  // extra rounds a promoted head serves before the rebuild
};

struct FaultEvent {
  int round = 0;
  int node_id = 0;
};

struct RoundMetrics {
  int round = 0;
  int alive = 0;
  long long packets_cum = 0;
  double residual_j = 0.0;
  std::vector<int> heads;  // sorted head set that served this round
};

struct LifetimeSummary {
  // empty milestone = not reached within max_rounds
  std::optional<int> first_death;
  std::optional<int> half_death;  // at least half the initial nodes dead
  std::optional<int> last_death;
  long long packets_total = 0;
};

// `kill <round> <node_id>` per line; '#' comments and blank lines are fine.
std::vector<FaultEvent> parse_fault_script(std::istream& in);
std::vector<FaultEvent> load_fault_script(const std::string& path);

/// Round-based protocol run over one deployment. The loop per round: scheduled
// fault kills, cluster rebuild when due, data collection/fusion/uplink, then
// (head protocol only) the low-power handover rule and dead-head failover.
class Simulation {
 public:
  Simulation(SimConfig cfg, Protocol protocol, std::vector<FaultEvent> faults = {},
             SimOptions options = {});

  // Runs one round; false when the network is dead or max_rounds is reached.
  bool step();
  // Steps to completion and returns the full metrics series.
  const std::vector<RoundMetrics>& run();

  const std::vector<SensorNode>& nodes() const { return nodes_; }
  const std::vector<RoundMetrics>& metrics() const { return metrics_; }
  const std::vector<PriorityPlan>& priority_plans() const { return plans_; }
  const std::vector<int>& current_heads() const { return heads_; }
  const std::vector<int>& member_map() const { return member_map_; }
  int current_rank() const { return current_rank_; }
  int round() const { return round_; }
  int alive_count() const { return alive_count_; }
  long long packets_cum() const { return packets_cum_; }
  int last_epoch_round() const { return last_epoch_round_; }
  // per node: round it died in, -1 while alive
  const std::vector<int>& death_rounds() const { return death_rounds_; }
  // every joule charged or burned, for conservation checks
  long double total_drained() const { return drained_; }
  double initial_total_energy() const { return initial_total_; }

 private:
  bool epoch_due() const;
  void epoch_setup();
  void setup_fttc_epoch();
  void setup_baseline_epoch();
  void install_heads(std::vector<int> heads);
  int resolve_cluster_count(int population) const;
  void run_round();
  void rotate_if_needed();
  void apply_fault_tolerance();
  void apply_faults_due();
  // charges cost if affordable (true), else burns the remaining residual (false);
  // either way a node reaching 0 J dies on the spot
  bool spend(int node_id, double cost);
  void die(int node_id);
  double total_residual() const;

  SimConfig cfg_;
  Protocol protocol_;
  SimOptions opt_;
  std::vector<FaultEvent> faults_;  // sorted by round
  std::size_t next_fault_ = 0;
  Rng rng_;
  std::vector<SensorNode> nodes_;
  double d1_nominal_ = 0.0;  // base distance to the nearest field point, for sizing

  int round_ = 0;
  int alive_count_ = 0;
  long long packets_cum_ = 0;
  std::vector<int> heads_;
  std::vector<int> member_map_;
  std::vector<PriorityPlan> plans_;
  int current_rank_ = 1;
  int last_epoch_round_ = -1;
  std::optional<int> force_epoch_at_;
  bool head_died_ = false;
  std::vector<RoundMetrics> metrics_;
  std::vector<int> death_rounds_;
  long double drained_ = 0.0L;
  double initial_total_ = 0.0;

  // the clustering pipeline is pure in the alive set, so rebuilds while nobody
  // has died since the last one can reuse its output
  std::uint64_t alive_version_ = 0;
  std::optional<std::uint64_t> cached_version_;
  std::vector<int> cached_heads_;
  std::vector<int> cached_member_map_;
  std::vector<PriorityPlan> cached_plans_;
};

std::vector<RoundMetrics> run_simulation(const SimConfig& cfg, Protocol protocol,
                                         const std::vector<FaultEvent>& faults = {},
                                         SimOptions options = {});

LifetimeSummary lifetime_summary(const std::vector<RoundMetrics>& metrics, int n_initial);

}  // namespace fttc
