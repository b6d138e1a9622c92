#include "fttc/net_model.hpp"

#include <cmath>
#include <stdexcept>

namespace fttc {

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
  const std::uint64_t bound = n;
  // reject the partial block at the top of the 64-bit range
  const std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = gen_();
    if (r >= threshold) return static_cast<std::size_t>(r % bound);
  }
}

Position default_base_position(double field_side) {
  return Position(field_side / 2.0, field_side + 90.0);
}

std::vector<std::string> validate_config(const NetworkConfig& cfg) {
  std::vector<std::string> errors;
  auto check = [&errors](bool ok, const char* msg) {
    if (!ok) errors.emplace_back(msg);
  };
  check(cfg.n_nodes >= 1, "n_nodes: must be >= 1");
  check(cfg.field_side > 0.0, "field_side: must be > 0");
  check(std::isfinite(cfg.base.x()) && std::isfinite(cfg.base.y()),
        "base: coordinates must be finite");
  check(cfg.comm_range > 0.0, "comm_range: must be > 0");
  check(cfg.base_range > 0.0, "base_range: must be > 0");
  check(cfg.initial_energy > 0.0, "initial_energy: must be > 0");
  check(cfg.message_bits > 0.0, "message_bits: must be > 0");
  check(cfg.recluster_period >= 1, "recluster_period: must be >= 1");
  check(cfg.ft_depth >= 1, "ft_depth: must be >= 1");
  check(cfg.cluster_count_override >= 0, "cluster_count_override: must be >= 0");
  if (cfg.n_nodes >= 1)
    check(cfg.cluster_count_override <= cfg.n_nodes,
          "cluster_count_override: must be <= n_nodes");
  check(cfg.max_rounds >= 0, "max_rounds: must be >= 0");
  return errors;
}

std::vector<SensorNode> deploy(const NetworkConfig& cfg, Rng& rng) {
  const auto errors = validate_config(cfg);
  if (!errors.empty()) throw std::invalid_argument("deploy: " + errors.front());
  std::vector<SensorNode> nodes;
  nodes.reserve(static_cast<std::size_t>(cfg.n_nodes));
  for (int i = 0; i < cfg.n_nodes; ++i) {
    Position p;
    do {
      p.x() = rng.uniform(0.0, cfg.field_side);
      p.y() = rng.uniform(0.0, cfg.field_side);
    } while (p.x() == cfg.base.x() && p.y() == cfg.base.y());
    nodes.push_back(SensorNode{i, p, cfg.initial_energy, true, Role::Member});
  }
  return nodes;
}

}  // namespace fttc
