#include "fttc/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fttc {

std::vector<FaultEvent> parse_fault_script(std::istream& in) {
  std::vector<FaultEvent> events;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string directive;
    if (!(tokens >> directive)) continue;  // blank line
    auto fail = [line_no](const std::string& why) {
      throw std::runtime_error("fault script line " + std::to_string(line_no) + ": " + why);
    };
    if (directive != "kill") fail("unknown directive '" + directive + "'");
    FaultEvent ev;
    if (!(tokens >> ev.round >> ev.node_id)) fail("expected: kill <round> <node_id>");
    std::string extra;
    if (tokens >> extra) fail("trailing input '" + extra + "'");
    if (ev.round < 0) fail("round must be >= 0");
    if (ev.node_id < 0) fail("node id must be >= 0");
    events.push_back(ev);
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const FaultEvent& a, const FaultEvent& b) { return a.round < b.round; });
  return events;
}

std::vector<FaultEvent> load_fault_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fault script: " + path);
  return parse_fault_script(in);
}

Simulation::Simulation(SimConfig cfg, Protocol protocol, std::vector<FaultEvent> faults,
                       SimOptions options)
    : cfg_(std::move(cfg)),
      protocol_(protocol),
      opt_(options),
      faults_(std::move(faults)),
      rng_(cfg_.net.rng_seed) {
  const auto errors = validate_config(cfg_.net);
  if (!errors.empty()) throw std::invalid_argument("Simulation: " + errors.front());
  if (cfg_.energy.e_tx <= 0.0 || cfg_.energy.e_rx <= 0.0 || cfg_.energy.e_da <= 0.0 ||
      cfg_.energy.eps1 <= 0.0 || cfg_.energy.eps2 <= 0.0)
    throw std::invalid_argument("Simulation: energy constants must be > 0");
  if (opt_.rotation_handover_rounds < 0)
    throw std::invalid_argument("Simulation: rotation_handover_rounds must be >= 0");
  for (const FaultEvent& ev : faults_)
    if (ev.node_id < 0 || ev.node_id >= cfg_.net.n_nodes)
      throw std::invalid_argument("Simulation: fault kill targets unknown node " +
                                  std::to_string(ev.node_id));
  std::stable_sort(faults_.begin(), faults_.end(),
                   [](const FaultEvent& a, const FaultEvent& b) { return a.round < b.round; });

  const Position clamped(std::clamp(cfg_.net.base.x(), 0.0, cfg_.net.field_side),
                         std::clamp(cfg_.net.base.y(), 0.0, cfg_.net.field_side));
  d1_nominal_ = (cfg_.net.base - clamped).norm();
  if (!optimal_cluster_count(1.0, cfg_.net.field_side, d1_nominal_, cfg_.energy) &&
      cfg_.net.cluster_count_override == 0)
    throw std::invalid_argument(
        "Simulation: the sizing formula has no optimum at this geometry; "
        "set cluster_count_override");

  nodes_ = deploy(cfg_.net, rng_);
  alive_count_ = cfg_.net.n_nodes;
  initial_total_ = cfg_.net.initial_energy * cfg_.net.n_nodes;
  death_rounds_.assign(nodes_.size(), -1);
  member_map_.assign(nodes_.size(), -1);
}

bool Simulation::epoch_due() const {
  if (round_ % cfg_.net.recluster_period == 0) return true;
  return force_epoch_at_ && round_ >= *force_epoch_at_;
}

int Simulation::resolve_cluster_count(int population) const {
  const auto opt = optimal_cluster_count(static_cast<double>(population),
                                         cfg_.net.field_side, d1_nominal_, cfg_.energy);
  if (opt) return opt->m_int;
  return std::min(cfg_.net.cluster_count_override, population);
}

void Simulation::install_heads(std::vector<int> heads) {
  std::sort(heads.begin(), heads.end());
  heads.erase(std::unique(heads.begin(), heads.end()), heads.end());
  heads_ = std::move(heads);
  member_map_ = assign_members(nodes_, heads_);
  for (SensorNode& n : nodes_)
    if (n.alive)
      n.role = std::binary_search(heads_.begin(), heads_.end(), n.id) ? Role::ClusterHead
                                                                      : Role::Member;
}

void Simulation::epoch_setup() {
  if (alive_count_ == 0) throw std::logic_error("epoch_setup: network is dead");
  force_epoch_at_.reset();
  last_epoch_round_ = round_;
  current_rank_ = 1;
  if (protocol_ == Protocol::Fttc)
    setup_fttc_epoch();
  else
    setup_baseline_epoch();
}

void Simulation::setup_fttc_epoch() {
  if (cached_version_ && *cached_version_ == alive_version_) {
    heads_ = cached_heads_;
    member_map_ = cached_member_map_;
    plans_ = cached_plans_;
    for (SensorNode& n : nodes_)
      if (n.alive)
        n.role = std::binary_search(heads_.begin(), heads_.end(), n.id) ? Role::ClusterHead
                                                                        : Role::Member;
    return;
  }

  const PlanEnergyContext ctx{cfg_.net.base, cfg_.net.message_bits, cfg_.energy};
  const RadioGraph graph =
      build_graph(nodes_, cfg_.net.base, cfg_.net.comm_range, cfg_.net.base_range);
  const TrajectoryField field = all_trajectories(graph);

  if (field.trajectories.empty()) {
    // nobody can reach the base over the hello graph: every alive node
    // reports on its own for this epoch
    std::vector<int> all_alive;
    for (const SensorNode& n : nodes_)
      if (n.alive) all_alive.push_back(n.id);
    plans_ = {plan_for_heads(1, all_alive, nodes_, ctx)};
    install_heads(std::move(all_alive));
  } else {
    const DissimilarityMatrix matrix = build_matrix(field.trajectories);
    const int target = resolve_cluster_count(matrix.n());
    const ThresholdSearch tuned = tune_threshold(matrix, target);
    ReclusterResult refined = recluster(matrix, tuned.plan.representatives);
    refined.plan.threshold = tuned.threshold;

    std::vector<int> heads;
    for (int rep : refined.plan.representatives) {
      const Trajectory& t = field.trajectories[static_cast<std::size_t>(rep)];
      heads.insert(heads.end(), t.node_path.begin(), t.node_path.end());
    }
    plans_ = fault_tolerant_plans(refined.plan, matrix, field.trajectories,
                                  cfg_.net.ft_depth, nodes_, ctx);
    install_heads(std::move(heads));
  }

  cached_version_ = alive_version_;
  cached_heads_ = heads_;
  cached_member_map_ = member_map_;
  cached_plans_ = plans_;
}

void Simulation::setup_baseline_epoch() {
  // random rotation: a fresh uniform draw of M heads every epoch
  std::vector<int> alive;
  for (const SensorNode& n : nodes_)
    if (n.alive) alive.push_back(n.id);
  const int m = std::min(resolve_cluster_count(alive_count_),
                         static_cast<int>(alive.size()));
  for (int i = 0; i < m; ++i) {
    const auto j = static_cast<std::size_t>(i) +
                   rng_.uniform_index(alive.size() - static_cast<std::size_t>(i));
    std::swap(alive[static_cast<std::size_t>(i)], alive[j]);
  }
  alive.resize(static_cast<std::size_t>(m));

  const PlanEnergyContext ctx{cfg_.net.base, cfg_.net.message_bits, cfg_.energy};
  plans_ = {plan_for_heads(1, alive, nodes_, ctx)};
  install_heads(std::move(alive));
}

void Simulation::run_round() {
  const std::vector<int> served = heads_;
  for (int h : served) {
    SensorNode& head = nodes_[static_cast<std::size_t>(h)];
    int received = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      SensorNode& member = nodes_[i];
      if (!member.alive || member.id == h || member_map_[i] != h) continue;
      const double d = (member.pos - head.pos).norm();
      const bool sent = spend(member.id, transmit_energy(cfg_.net.message_bits, d, cfg_.energy));
      if (sent && head.alive &&
          spend(h, receive_energy(cfg_.net.message_bits, cfg_.energy)))
        ++received;
    }
    if (!head.alive) continue;
    if (!spend(h, aggregation_energy(cfg_.net.message_bits, received + 1, cfg_.energy)))
      continue;
    const double up = (head.pos - cfg_.net.base).norm();
    if (spend(h, transmit_energy(cfg_.net.message_bits, up, cfg_.energy)))
      packets_cum_ += received + 1;  // the fused packet covers every received reading plus the head's own
  }
  metrics_.push_back(RoundMetrics{round_, alive_count_, packets_cum_, total_residual(), served});
}

void Simulation::rotate_if_needed() {
  const std::vector<int> served = heads_;
  bool any = false;
  for (int h : served) {
    if (!nodes_[static_cast<std::size_t>(h)].alive) continue;  // failover's job, not rotation's
    double min_res = std::numeric_limits<double>::infinity();
    int strongest = -1;
    double strongest_res = -1.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const SensorNode& n = nodes_[i];
      if (!n.alive || n.id == h || member_map_[i] != h) continue;
      min_res = std::min(min_res, n.residual_j);
      if (n.residual_j > strongest_res) {  // ascending scan keeps the lowest id on ties
        strongest_res = n.residual_j;
        strongest = n.id;
      }
    }
    if (strongest < 0) continue;  // no alive members to hand over to
    if (nodes_[static_cast<std::size_t>(h)].residual_j >= min_res) continue;

    // the strongest member takes the cluster over
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (member_map_[i] == h) member_map_[i] = strongest;
    heads_.erase(std::find(heads_.begin(), heads_.end(), h));
    heads_.insert(std::lower_bound(heads_.begin(), heads_.end(), strongest), strongest);
    nodes_[static_cast<std::size_t>(h)].role = Role::Member;
    nodes_[static_cast<std::size_t>(strongest)].role = Role::ClusterHead;
    any = true;
  }
  if (any) {
    // a handover makes the base rebuild the clusters at the next boundary
    const int at = round_ + 1 + opt_.rotation_handover_rounds;
    if (!force_epoch_at_ || at < *force_epoch_at_) force_epoch_at_ = at;
  }
}

void Simulation::apply_fault_tolerance() {
  if (!head_died_) return;
  head_died_ = false;
  for (std::size_t r = static_cast<std::size_t>(current_rank_); r < plans_.size(); ++r) {
    const PriorityPlan& plan = plans_[r];
    const bool usable = std::all_of(
        plan.head_node_ids.begin(), plan.head_node_ids.end(),
        [this](int id) { return nodes_[static_cast<std::size_t>(id)].alive; });
    if (usable) {
      install_heads(plan.head_node_ids);
      current_rank_ = plan.rank;
      return;
    }
  }
  // every standby plan is compromised: rebuild from scratch next round
  if (!force_epoch_at_ || round_ + 1 < *force_epoch_at_) force_epoch_at_ = round_ + 1;
}

void Simulation::apply_faults_due() {
  while (next_fault_ < faults_.size() && faults_[next_fault_].round == round_) {
    const FaultEvent& ev = faults_[next_fault_++];
    SensorNode& n = nodes_[static_cast<std::size_t>(ev.node_id)];
    if (n.alive) {
      // hardware fault: whatever charge is left is gone with the node
      drained_ += static_cast<long double>(n.residual_j);
      n.residual_j = 0.0;
      die(ev.node_id);
    }
  }
}

bool Simulation::spend(int node_id, double cost) {
  SensorNode& n = nodes_[static_cast<std::size_t>(node_id)];
  const double before = n.residual_j;
  if (before >= cost) {
    n.residual_j = before - cost;
    drained_ += static_cast<long double>(before) - static_cast<long double>(n.residual_j);
    if (n.residual_j == 0.0) die(node_id);
    return true;
  }
  // not enough for the action: the attempt exhausts what is left
  n.residual_j = 0.0;
  drained_ += static_cast<long double>(before);
  die(node_id);
  return false;
}

void Simulation::die(int node_id) {
  SensorNode& n = nodes_[static_cast<std::size_t>(node_id)];
  if (!n.alive) return;
  n.alive = false;
  death_rounds_[static_cast<std::size_t>(node_id)] = round_;
  --alive_count_;
  ++alive_version_;
  if (std::binary_search(heads_.begin(), heads_.end(), node_id)) head_died_ = true;
}

double Simulation::total_residual() const {
  double sum = 0.0;
  for (const SensorNode& n : nodes_) sum += n.residual_j;
  return sum;
}

bool Simulation::step() {
  if (round_ >= cfg_.net.max_rounds || alive_count_ == 0) return false;
  apply_faults_due();
  if (alive_count_ == 0) {
    // the kills wiped the network before the round could run; keep the
    // terminal row so the death milestones stay visible in the series
    metrics_.push_back(RoundMetrics{round_, 0, packets_cum_, total_residual(), {}});
    ++round_;
    return true;
  }
  if (epoch_due()) epoch_setup();
  run_round();
  if (protocol_ == Protocol::Fttc) {
    if (opt_.rotation_enabled) rotate_if_needed();
    apply_fault_tolerance();
  }
  ++round_;
  return true;
}

const std::vector<RoundMetrics>& Simulation::run() {
  while (step()) {
  }
  return metrics_;
}

std::vector<RoundMetrics> run_simulation(const SimConfig& cfg, Protocol protocol,
                                         const std::vector<FaultEvent>& faults,
                                         SimOptions options) {
  Simulation sim(cfg, protocol, faults, options);
  return sim.run();
}

LifetimeSummary lifetime_summary(const std::vector<RoundMetrics>& metrics, int n_initial) {
  if (n_initial < 1) throw std::invalid_argument("lifetime_summary: need n_initial >= 1");
  LifetimeSummary out;
  for (const RoundMetrics& row : metrics) {
    if (!out.first_death && row.alive < n_initial) out.first_death = row.round;
    if (!out.half_death && 2 * row.alive <= n_initial) out.half_death = row.round;
    if (!out.last_death && row.alive == 0) {
      out.last_death = row.round;
      break;
    }
  }
  if (!metrics.empty()) out.packets_total = metrics.back().packets_cum;
  return out;
}

}  // namespace fttc
