#include "fttc/experiment.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

namespace {

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(pos, comma - pos);
    if (item.empty()) throw fttc::ConfigError("--seeds: empty entry in '" + text + "'");
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), seed);
    if (ec != std::errc{} || ptr != item.data() + item.size())
      throw fttc::ConfigError("--seeds: '" + item + "' is not an unsigned integer");
    seeds.push_back(seed);
    pos = comma + 1;
  }
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensor-network lifetime simulator: trajectory-clustered heads vs. random rotation"};

  std::string config_path;
  std::string protocol = "both";
  std::string seeds_text;
  std::string faults_path;
  std::string out_dir = "out";
  int max_rounds_override = -1;

  app.add_option("--config", config_path, "config file (key = value lines)");
  app.add_option("--protocol", protocol, "fttc | baseline | both")
      ->check(CLI::IsMember({"fttc", "baseline", "both"}));
  app.add_option("--seeds", seeds_text, "comma-separated RNG seeds (default: config seed)");
  app.add_option("--faults", faults_path, "fault script: lines of 'kill <round> <node_id>'");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--max-rounds", max_rounds_override, "round cap, overrides the config value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);     // prints help or the usage message
    return code == 0 ? 0 : 1;   // 0 for --help, 1 for usage errors
  }

  try {
    fttc::RunSpec spec;
    spec.config = config_path.empty() ? fttc::SimConfig{} : fttc::load_config(config_path);
    if (max_rounds_override >= 0) spec.config.net.max_rounds = max_rounds_override;

    if (protocol == "fttc") {
      spec.protocols = {fttc::Protocol::Fttc};
    } else if (protocol == "baseline") {
      spec.protocols = {fttc::Protocol::Baseline};
    } else {
      spec.protocols = {fttc::Protocol::Fttc, fttc::Protocol::Baseline};
    }

    spec.seeds = seeds_text.empty() ? std::vector<std::uint64_t>{spec.config.net.rng_seed}
                                    : parse_seed_list(seeds_text);
    if (!faults_path.empty()) spec.fault_script_path = faults_path;
    spec.output_dir = out_dir;

    return fttc::run_experiment(spec);
  } catch (const fttc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
