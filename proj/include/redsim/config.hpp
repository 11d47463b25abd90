#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "redsim/topology.hpp"

namespace redsim {

// One experiment matrix: the cartesian product of topology x policy x
// capacity x alpha x pattern, repeated over seeds. Flat key = value text
// with comma lists; REDSIM_<KEY> environment variables override file keys.
struct ScenarioConfig {
  std::vector<std::string> topologies;  // file paths
  std::optional<Level> level;           // checked against each file's tag
  std::vector<std::string> policies = {"all", "cachedbit", "nbsc"};
  std::vector<std::size_t> cache_chunks = {128, 256, 512, 1024};
  std::vector<double> alphas = {0.9};
  std::vector<std::string> patterns = {"constant"};
  std::size_t requests = 100000;
  double warmup = 0.2;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::size_t catalog_chunks = 100000;
  std::uint32_t chunk_size = 1024;

  // "auto" follows the published setup: 20 servers, 10 when the
  // topology has fewer than 40 POPs. An integer pins the count.
  std::string servers = "auto";

  bool cachedbit_last_copy = true;
  std::uint32_t nbsc_radius = 1;
  std::uint64_t nbsc_exchange = 1000;
  bool nbsc_probe_every_hop = true;
  std::uint32_t bloom_bits_per_chunk = 16;
  std::uint32_t bloom_hashes = 4;

  std::uint32_t shim_bytes = 32;
  std::size_t smartre_window = 0;  // 0 = whole trace
  std::vector<double> smartre_scales = {1.0, 0.5, 0.25, 0.125};
  std::string smartre_capacity_mode = "mapped";  // mapped | ideal

  std::vector<std::string> compare_left;  // default: caching policies present
  std::string compare_right = "smartre-lp";

  bool export_fulfillment = false;
  bool export_traces = false;
  bool export_hop_cdf = true;
};

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

// Every key with its resolved value, one per line, sorted; the hash of
// this text is embedded in report rows.
std::string canonical_config_text(const ScenarioConfig& cfg);
std::uint64_t config_hash(const ScenarioConfig& cfg);

std::size_t resolve_server_count(const ScenarioConfig& cfg,
                                 const Topology& topo);

}  // namespace redsim
