#pragma once

#include <optional>

namespace fttc {

// First-order radio constants. Electronics and aggregation are J/bit, the two
// amplifiers are J/(bit*m^2) and J/(bit*m^4).
struct EnergyParams {
  double e_tx = 50e-9;
  double e_rx = 50e-9;
  double e_da = 5e-9;
  double eps1 = 10e-12;      // free-space amplifier, below the crossover
  double eps2 = 0.0013e-12;  // two-ray amplifier, at and beyond the crossover

  // sqrt(eps1/eps2), the unique distance where both amplifier models agree
  // (~87.71 m with the defaults).
  double crossover_distance() const;
};

// Per-action radio costs. Preconditions (positive bit count, non-negative
// distance and message count) are enforced with std::invalid_argument.
double transmit_energy(double bits, double distance_m, const EnergyParams& p);
double receive_energy(double bits, const EnergyParams& p);
double aggregation_energy(double bits, double k_messages, const EnergyParams& p);

// Closed-form per-round costs used for cluster sizing and standby-plan
// ranking. The head formula charges one electronics term per fused message
// plus an amplifier-only uplink; the simulator itself charges the complete
// per-action costs above, these stay analytical.
double head_round_energy(double bits, double messages, double d_base_m,
                         const EnergyParams& p);

// Expected head distance of a member under uniform deployment: sqrt(A^2/(2*pi*M)).
double expected_member_distance(double field_side_m, double cluster_count);

double member_round_energy(double bits, double field_side_m, double cluster_count,
                           const EnergyParams& p);

// Whole-network per-round cost at cluster count M: every message transmitted
// and received once, aggregated once, M long uplinks, N-M short uplinks.
double total_round_energy(double bits, double n_nodes, double cluster_count,
                          double field_side_m, double d_base_m,
                          const EnergyParams& p);

struct ClusterCount {
  double m_real = 0.0;
  int m_int = 0;  // m_real rounded half-up, clamped to [1, N]
};

// Cluster count minimizing total_round_energy. Empty when eps2*d^4 <= e_tx:
// the cost is then monotone in M and the caller must pick a count itself.
std::optional<ClusterCount> optimal_cluster_count(double n_nodes, double field_side_m,
                                                  double d_base_m, const EnergyParams& p);

}  // namespace fttc
