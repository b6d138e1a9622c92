#include "fttc/experiment.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <system_error>

namespace fttc {
namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

long long parse_int(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
  long long out = 0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    fail(origin, line, "expected an integer for '" + key + "', got '" + value + "'");
  return out;
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
  // strtod instead of from_chars: older libstdc++ lacks the double overload
  errno = 0;
  char* end = nullptr;
  double out = std::strtod(value.c_str(), &end);
  if (errno != 0 || end != value.c_str() + value.size() || value.empty())
    fail(origin, line, "expected a number for '" + key + "', got '" + value + "'");
  return out;
}

std::uint64_t parse_seed(const std::string& origin, int line, const std::string& key,
                         const std::string& value) {
  std::uint64_t out = 0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    fail(origin, line, "expected an unsigned integer for '" + key + "', got '" + value + "'");
  return out;
}

// 9 significant digits, shortest-general form; enough to reconstruct the
// conservation checks from the files alone.
std::string format_double(double v) {
  char buf[64];
  int n = std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string protocol_name(Protocol p) {
  return p == Protocol::Fttc ? "fttc" : "baseline";
}

std::string metrics_csv(const std::vector<RoundMetrics>& metrics) {
  std::string out = "round,alive,packets_cum,residual_j,heads\n";
  for (const RoundMetrics& m : metrics) {
    out += std::to_string(m.round);
    out += ',';
    out += std::to_string(m.alive);
    out += ',';
    out += std::to_string(m.packets_cum);
    out += ',';
    out += format_double(m.residual_j);
    out += ',';
    for (std::size_t i = 0; i < m.heads.size(); ++i) {
      if (i) out += ';';
      out += std::to_string(m.heads[i]);
    }
    out += '\n';
  }
  return out;
}

struct RunResult {
  Protocol protocol{};
  std::uint64_t seed = 0;
  LifetimeSummary summary;
};

std::string mean_milestone(const std::vector<std::optional<int>>& values, int max_rounds) {
  long long sum = 0;
  for (const auto& v : values) {
    if (!v.has_value()) return ">" + std::to_string(max_rounds);
    sum += *v;
  }
  const auto count = static_cast<long long>(values.size());
  if (sum % count == 0) return std::to_string(sum / count);
  return format_double(static_cast<double>(sum) / static_cast<double>(count));
}

std::string mean_packets(const std::vector<long long>& values) {
  long long sum = 0;
  for (long long v : values) sum += v;
  const auto count = static_cast<long long>(values.size());
  if (sum % count == 0) return std::to_string(sum / count);
  return format_double(static_cast<double>(sum) / static_cast<double>(count));
}

std::string summary_csv(const std::vector<RunResult>& results,
                        const std::vector<Protocol>& protocols, int max_rounds) {
  std::string out = "protocol,seed,first_death,half_death,last_death,packets_total\n";
  for (const RunResult& r : results) {
    out += protocol_name(r.protocol);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += format_milestone(r.summary.first_death, max_rounds);
    out += ',';
    out += format_milestone(r.summary.half_death, max_rounds);
    out += ',';
    out += format_milestone(r.summary.last_death, max_rounds);
    out += ',';
    out += std::to_string(r.summary.packets_total);
    out += '\n';
  }
  for (Protocol p : protocols) {
    std::vector<std::optional<int>> first, half, last;
    std::vector<long long> packets;
    for (const RunResult& r : results) {
      if (r.protocol != p) continue;
      first.push_back(r.summary.first_death);
      half.push_back(r.summary.half_death);
      last.push_back(r.summary.last_death);
      packets.push_back(r.summary.packets_total);
    }
    if (first.empty()) continue;
    out += protocol_name(p);
    out += ",mean,";
    out += mean_milestone(first, max_rounds);
    out += ',';
    out += mean_milestone(half, max_rounds);
    out += ',';
    out += mean_milestone(last, max_rounds);
    out += ',';
    out += mean_packets(packets);
    out += '\n';
  }
  return out;
}

std::string metadata_json(const RunSpec& spec) {
  const NetworkConfig& net = spec.config.net;
  const EnergyParams& e = spec.config.energy;
  nlohmann::ordered_json j;
  j["network"] = {
      {"n_nodes", net.n_nodes},
      {"field_side", net.field_side},
      {"base_x", net.base.x()},
      {"base_y", net.base.y()},
      {"comm_range", net.comm_range},
      {"base_range", net.base_range},
      {"initial_energy", net.initial_energy},
      {"message_bits", net.message_bits},
      {"recluster_period", net.recluster_period},
      {"ft_depth", net.ft_depth},
      {"cluster_count_override", net.cluster_count_override},
      {"rng_seed", net.rng_seed},
      {"max_rounds", net.max_rounds},
  };
  j["energy"] = {
      {"e_tx", e.e_tx}, {"e_rx", e.e_rx}, {"e_da", e.e_da},
      {"eps1", e.eps1}, {"eps2", e.eps2},
  };
  std::vector<std::string> protocol_names;
  for (Protocol p : spec.protocols) protocol_names.push_back(protocol_name(p));
  j["protocols"] = protocol_names;
  j["seeds"] = spec.seeds;
  j["rng"] = Rng::kAlgorithm;
  if (spec.fault_script_path)
    j["fault_script"] = *spec.fault_script_path;
  else
    j["fault_script"] = nullptr;
  j["assumptions"] = {
      "hello and broadcast phases are not charged against node batteries",
      "member-to-head and head-to-base links are single hop per round",
  };
  return j.dump(2) + "\n";
}

}  // namespace

std::string format_milestone(const std::optional<int>& milestone, int max_rounds) {
  if (milestone.has_value()) return std::to_string(*milestone);
  return ">" + std::to_string(max_rounds);
}

SimConfig parse_config(std::istream& in, const std::string& origin) {
  SimConfig cfg;
  NetworkConfig& net = cfg.net;
  EnergyParams& energy = cfg.energy;

  bool saw_base_x = false;
  bool saw_base_y = false;
  double base_x = 0.0;
  double base_y = 0.0;
  std::map<std::string, int> seen;  // key -> first line, for duplicate reports

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, line_no, "missing key before '='");
    if (value.empty()) fail(origin, line_no, "missing value for '" + key + "'");
    if (auto [it, fresh] = seen.emplace(key, line_no); !fresh)
      fail(origin, line_no, "duplicate key '" + key + "' (first set on line " +
                                std::to_string(it->second) + ")");

    if (key == "n_nodes") {
      net.n_nodes = static_cast<int>(parse_int(origin, line_no, key, value));
    } else if (key == "field_side") {
      net.field_side = parse_double(origin, line_no, key, value);
    } else if (key == "base_x") {
      base_x = parse_double(origin, line_no, key, value);
      saw_base_x = true;
    } else if (key == "base_y") {
      base_y = parse_double(origin, line_no, key, value);
      saw_base_y = true;
    } else if (key == "comm_range") {
      net.comm_range = parse_double(origin, line_no, key, value);
    } else if (key == "base_range") {
      net.base_range = parse_double(origin, line_no, key, value);
    } else if (key == "initial_energy") {
      net.initial_energy = parse_double(origin, line_no, key, value);
    } else if (key == "message_bits") {
      net.message_bits = parse_double(origin, line_no, key, value);
    } else if (key == "recluster_period") {
      net.recluster_period = static_cast<int>(parse_int(origin, line_no, key, value));
    } else if (key == "ft_depth") {
      net.ft_depth = static_cast<int>(parse_int(origin, line_no, key, value));
    } else if (key == "cluster_count_override") {
      net.cluster_count_override = static_cast<int>(parse_int(origin, line_no, key, value));
    } else if (key == "rng_seed") {
      net.rng_seed = parse_seed(origin, line_no, key, value);
    } else if (key == "max_rounds") {
      net.max_rounds = static_cast<int>(parse_int(origin, line_no, key, value));
    } else if (key == "e_tx") {
      energy.e_tx = parse_double(origin, line_no, key, value);
    } else if (key == "e_rx") {
      energy.e_rx = parse_double(origin, line_no, key, value);
    } else if (key == "e_da") {
      energy.e_da = parse_double(origin, line_no, key, value);
    } else if (key == "eps1") {
      energy.eps1 = parse_double(origin, line_no, key, value);
    } else if (key == "eps2") {
      energy.eps2 = parse_double(origin, line_no, key, value);
    } else {
      fail(origin, line_no, "unknown key '" + key + "'");
    }
  }

  if (saw_base_x != saw_base_y)
    throw ConfigError(origin + ": base_x and base_y must be given together");
  net.base = saw_base_x ? Position(base_x, base_y) : default_base_position(net.field_side);

  std::vector<std::string> problems = validate_config(net);
  if (energy.e_tx <= 0 || energy.e_rx <= 0 || energy.e_da <= 0 || energy.eps1 <= 0 ||
      energy.eps2 <= 0)
    problems.push_back("energy constants: all must be positive");
  if (!problems.empty()) {
    std::string msg = origin + ": invalid configuration";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse_config(in, path);
}

int run_experiment(const RunSpec& spec) {
  if (spec.seeds.empty()) throw ConfigError("run spec: at least one seed required");
  if (spec.protocols.empty()) throw ConfigError("run spec: at least one protocol required");
  if (spec.output_dir.empty()) throw ConfigError("run spec: output_dir required");

  std::vector<FaultEvent> faults;
  if (spec.fault_script_path) faults = load_fault_script(*spec.fault_script_path);

  std::error_code ec;
  fs::create_directories(spec.output_dir, ec);
  if (ec) throw std::runtime_error(spec.output_dir + ": cannot create output dir: " + ec.message());

  std::vector<RunResult> results;
  for (Protocol protocol : spec.protocols) {
    for (std::uint64_t seed : spec.seeds) {
      SimConfig cfg = spec.config;
      cfg.net.rng_seed = seed;
      Simulation sim(cfg, protocol, faults);
      sim.run();

      RunResult r;
      r.protocol = protocol;
      r.seed = seed;
      r.summary = lifetime_summary(sim.metrics(), cfg.net.n_nodes);
      results.push_back(r);

      fs::path file = fs::path(spec.output_dir) /
                      ("metrics_" + protocol_name(protocol) + "_" + std::to_string(seed) + ".csv");
      write_file_atomic(file, metrics_csv(sim.metrics()));
    }
  }

  write_file_atomic(fs::path(spec.output_dir) / "summary.csv",
                    summary_csv(results, spec.protocols, spec.config.net.max_rounds));
  write_file_atomic(fs::path(spec.output_dir) / "metadata.json", metadata_json(spec));
  return 0;
}

}  // namespace fttc
