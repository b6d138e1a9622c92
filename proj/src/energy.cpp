#include "fttc/energy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fttc {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

}  // namespace

double EnergyParams::crossover_distance() const { return std::sqrt(eps1 / eps2); }

double transmit_energy(double bits, double distance_m, const EnergyParams& p) {
  require(bits > 0.0, "transmit_energy: bits must be > 0");
  require(distance_m >= 0.0, "transmit_energy: distance must be >= 0");
  const double d2 = distance_m * distance_m;
  if (distance_m < p.crossover_distance()) return p.e_tx * bits + p.eps1 * d2 * bits;
  return p.e_tx * bits + p.eps2 * (d2 * d2) * bits;
}

double receive_energy(double bits, const EnergyParams& p) {
  require(bits > 0.0, "receive_energy: bits must be > 0");
  return p.e_rx * bits;
}

double aggregation_energy(double bits, double k_messages, const EnergyParams& p) {
  require(bits > 0.0, "aggregation_energy: bits must be > 0");
  require(k_messages >= 0.0, "aggregation_energy: message count must be >= 0");
  return p.e_da * bits * k_messages;
}

double head_round_energy(double bits, double messages, double d_base_m,
                         const EnergyParams& p) {
  require(bits > 0.0, "head_round_energy: bits must be > 0");
  require(messages >= 0.0, "head_round_energy: message count must be >= 0");
  require(d_base_m >= 0.0, "head_round_energy: distance must be >= 0");
  const double d2 = d_base_m * d_base_m;
  return bits * p.e_tx * messages + bits * p.e_da * messages + bits * p.eps2 * (d2 * d2);
}

double expected_member_distance(double field_side_m, double cluster_count) {
  require(field_side_m > 0.0, "expected_member_distance: field side must be > 0");
  require(cluster_count >= 1.0, "expected_member_distance: cluster count must be >= 1");
  return std::sqrt(field_side_m * field_side_m / (kTwoPi * cluster_count));
}

double member_round_energy(double bits, double field_side_m, double cluster_count,
                           const EnergyParams& p) {
  require(bits > 0.0, "member_round_energy: bits must be > 0");
  require(field_side_m > 0.0, "member_round_energy: field side must be > 0");
  require(cluster_count >= 1.0, "member_round_energy: cluster count must be >= 1");
  return bits * p.e_tx +
         bits * p.eps1 * (field_side_m * field_side_m) / (kTwoPi * cluster_count);
}

double total_round_energy(double bits, double n_nodes, double cluster_count,
                          double field_side_m, double d_base_m, const EnergyParams& p) {
  require(bits > 0.0, "total_round_energy: bits must be > 0");
  require(cluster_count >= 1.0, "total_round_energy: cluster count must be >= 1");
  require(n_nodes >= cluster_count, "total_round_energy: need N >= M");
  require(field_side_m > 0.0, "total_round_energy: field side must be > 0");
  require(d_base_m >= 0.0, "total_round_energy: distance must be >= 0");
  const double d2 = d_base_m * d_base_m;
  return bits * (2.0 * p.e_tx * n_nodes + p.e_da * n_nodes +
                 cluster_count * p.eps2 * (d2 * d2) +
                 (n_nodes - cluster_count) * p.eps1 * (field_side_m * field_side_m) /
                     (kTwoPi * cluster_count));
}

std::optional<ClusterCount> optimal_cluster_count(double n_nodes, double field_side_m,
                                                  double d_base_m, const EnergyParams& p) {
  require(n_nodes >= 1.0, "optimal_cluster_count: need at least one node");
  require(field_side_m > 0.0, "optimal_cluster_count: field side must be > 0");
  require(d_base_m >= 0.0, "optimal_cluster_count: distance must be >= 0");
  const double d2 = d_base_m * d_base_m;
  const double uplink = p.eps2 * (d2 * d2);
  if (uplink <= p.e_tx) return std::nullopt;
  ClusterCount out;
  out.m_real = field_side_m * std::sqrt(n_nodes / kTwoPi * p.eps1 / (uplink - p.e_tx));
  const double rounded = std::floor(out.m_real + 0.5);
  const double clamped = std::min(std::max(rounded, 1.0), n_nodes);
  out.m_int = static_cast<int>(clamped);
  return out;
}

}  // namespace fttc
