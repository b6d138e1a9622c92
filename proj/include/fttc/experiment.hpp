#pragma once

#include "fttc/sim_engine.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fttc {

// Anything wrong with a config file or run spec; message carries the line
// number when one applies.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSpec {
  SimConfig config;
  std::vector<Protocol> protocols;  // run order
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> fault_script_path;
  std::string output_dir;
};

// Flat `key = value` lines, '#' comments, unknown keys rejected, missing keys
// take the defaults. base_x/base_y come as a pair; left out, the base sits at
// the default standoff for the configured field side.
SimConfig load_config(const std::string& path);
SimConfig parse_config(std::istream& in, const std::string& origin);

// One metrics CSV per (protocol, seed), a summary.csv with per-run milestone
// rows plus a `seed=mean` row per protocol, and a metadata.json describing the
// run. All files are written atomically and byte-deterministic for a fixed
// spec. Returns 0 on success; throws ConfigError on bad specs and
// std::runtime_error on I/O failure.
int run_experiment(const RunSpec& spec);

// `>N` when the milestone was not reached within N rounds.
std::string format_milestone(const std::optional<int>& milestone, int max_rounds);

}  // namespace fttc
