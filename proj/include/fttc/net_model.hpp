#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fttc {

using Position = Eigen::Vector2d;

// Seeded generator with an explicit bit-to-double mapping so traces reproduce
// bit-for-bit across standard libraries. kAlgorithm is recorded in run metadata.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64/u53";

  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // [0,1) with the full 53-bit mantissa
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // unbiased draw from [0,n) by rejection
  std::size_t uniform_index(std::size_t n);

 private:
  std::mt19937_64 gen_;
};

enum class Role { Member, ClusterHead };

struct SensorNode {
  int id = 0;
  Position pos{0.0, 0.0};
  double residual_j = 0.0;
  bool alive = true;
  Role role = Role::Member;
};

struct NetworkConfig {
  int n_nodes = 100;
  double field_side = 100.0;       // square field [0,A]^2
  Position base{50.0, 190.0};      // sink position; default sits 90 m beyond the top edge
  double comm_range = 25.0;        // node-node hello radius
  double base_range = 120.0;       // node-base hello radius (the sink is not energy bound)
  double initial_energy = 2.0;     // J per node
  double message_bits = 4128.0;    // one 516-byte data message
  int recluster_period = 20;       // rounds between scheduled cluster rebuilds
  int ft_depth = 4;                // ranked standby head plans kept per epoch
  int cluster_count_override = 0;  // 0 = derive from the sizing formula
  std::uint64_t rng_seed = 1;
  int max_rounds = 10000;
};

// Centered, 90 m beyond the top edge - the default sink placement for a field side.
Position default_base_position(double field_side);

// Every violated constraint as "field: requirement"; empty means usable.
std::vector<std::string> validate_config(const NetworkConfig& cfg);

// Uniform i.i.d. deployment over [0,A]^2, ids 0..n-1 in draw order. Re-draws
// the (measure-zero) exact hit on the base position so no node sits on the sink.
std::vector<SensorNode> deploy(const NetworkConfig& cfg, Rng& rng);

}  // namespace fttc
