#include "redsim/config.hpp"

#include "redsim/rng.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace redsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T v{};
  if constexpr (std::is_floating_point_v<T>) {
    char* end = nullptr;
    v = static_cast<T>(std::strtod(value.c_str(), &end));
    if (end != value.c_str() + value.size())
      throw std::runtime_error("config: bad number for " + key + ": " + value);
  } else {
    auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size())
      throw std::runtime_error("config: bad integer for " + key + ": " + value);
  }
  return v;
}

template <typename T>
std::vector<T> parse_number_list(const std::string& key,
                                 const std::string& value) {
  std::vector<T> out;
  for (const std::string& item : split_list(value))
    out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw std::runtime_error("config: empty list for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw std::runtime_error("config: bad boolean for " + key + ": " + value);
}

const std::vector<std::string> kKnownPolicies = {
    "none", "all", "cachedbit", "nbsc", "smartre-lp", "smartre-greedy",
    "endre"};

void apply(ScenarioConfig& cfg, const std::string& key,
           const std::string& value) {
  if (key == "topology") {
    cfg.topologies = split_list(value);
  } else if (key == "level") {
    auto lvl = parse_level(value);
    if (!lvl) throw std::runtime_error("config: bad level: " + value);
    cfg.level = lvl;
  } else if (key == "policy") {
    cfg.policies = split_list(value);
    for (const auto& p : cfg.policies)
      if (std::find(kKnownPolicies.begin(), kKnownPolicies.end(), p) ==
          kKnownPolicies.end())
        throw std::runtime_error("config: unknown policy: " + p);
  } else if (key == "cache_chunks") {
    cfg.cache_chunks = parse_number_list<std::size_t>(key, value);
  } else if (key == "alpha") {
    cfg.alphas = parse_number_list<double>(key, value);
  } else if (key == "pattern") {
    cfg.patterns = split_list(value);
    for (const auto& p : cfg.patterns)
      if (p != "constant" && p != "gravity")
        throw std::runtime_error("config: unknown pattern: " + p);
  } else if (key == "requests") {
    cfg.requests = parse_number<std::size_t>(key, value);
  } else if (key == "warmup") {
    cfg.warmup = parse_number<double>(key, value);
    if (cfg.warmup < 0.0 || cfg.warmup >= 1.0)
      throw std::runtime_error("config: warmup must be in [0, 1)");
  } else if (key == "seeds") {
    cfg.seeds = parse_number_list<std::uint64_t>(key, value);
  } else if (key == "catalog_chunks") {
    cfg.catalog_chunks = parse_number<std::size_t>(key, value);
  } else if (key == "chunk_size") {
    cfg.chunk_size = parse_number<std::uint32_t>(key, value);
  } else if (key == "servers") {
    if (value != "auto") parse_number<std::size_t>(key, value);  // validate
    cfg.servers = value;
  } else if (key == "cachedbit_last_copy") {
    cfg.cachedbit_last_copy = parse_bool(key, value);
  } else if (key == "nbsc_radius") {
    cfg.nbsc_radius = parse_number<std::uint32_t>(key, value);
  } else if (key == "nbsc_exchange") {
    cfg.nbsc_exchange = parse_number<std::uint64_t>(key, value);
  } else if (key == "nbsc_probe_every_hop") {
    cfg.nbsc_probe_every_hop = parse_bool(key, value);
  } else if (key == "bloom_bits_per_chunk") {
    cfg.bloom_bits_per_chunk = parse_number<std::uint32_t>(key, value);
  } else if (key == "bloom_hashes") {
    cfg.bloom_hashes = parse_number<std::uint32_t>(key, value);
  } else if (key == "shim_bytes") {
    cfg.shim_bytes = parse_number<std::uint32_t>(key, value);
  } else if (key == "smartre_window") {
    cfg.smartre_window = parse_number<std::size_t>(key, value);
  } else if (key == "smartre_scales") {
    cfg.smartre_scales = parse_number_list<double>(key, value);
  } else if (key == "smartre_capacity_mode") {
    if (value != "mapped" && value != "ideal")
      throw std::runtime_error("config: smartre_capacity_mode must be mapped or ideal");
    cfg.smartre_capacity_mode = value;
  } else if (key == "compare_left") {
    cfg.compare_left = split_list(value);
  } else if (key == "compare_right") {
    cfg.compare_right = value;
  } else if (key == "export_fulfillment") {
    cfg.export_fulfillment = parse_bool(key, value);
  } else if (key == "export_traces") {
    cfg.export_traces = parse_bool(key, value);
  } else if (key == "export_hop_cdf") {
    cfg.export_hop_cdf = parse_bool(key, value);
  } else {
    throw std::runtime_error("config: unknown key: " + key);
  }
}

// REDSIM_CACHE_CHUNKS=... overrides cache_chunks, and so on.
void apply_env_overrides(ScenarioConfig& cfg) {
  static const char* keys[] = {
      "topology", "level", "policy", "cache_chunks", "alpha", "pattern",
      "requests", "warmup", "seeds", "catalog_chunks", "chunk_size",
      "servers", "cachedbit_last_copy", "nbsc_radius", "nbsc_exchange",
      "nbsc_probe_every_hop", "bloom_bits_per_chunk", "bloom_hashes",
      "shim_bytes", "smartre_window", "smartre_scales",
      "smartre_capacity_mode", "compare_left", "compare_right",
      "export_fulfillment", "export_traces", "export_hop_cdf"};
  for (const char* key : keys) {
    std::string env = "REDSIM_";
    for (const char* c = key; *c; ++c)
      env += static_cast<char>(std::toupper(static_cast<unsigned char>(*c)));
    if (const char* value = std::getenv(env.c_str()))
      apply(cfg, key, value);
  }
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.topologies.empty())
    throw std::runtime_error("config: at least one topology is required");
  if (cfg.policies.empty() || cfg.cache_chunks.empty() ||
      cfg.alphas.empty() || cfg.patterns.empty() || cfg.seeds.empty())
    throw std::runtime_error("config: empty scenario axis");
  if (cfg.requests == 0)
    throw std::runtime_error("config: requests must be >= 1");
  if (cfg.catalog_chunks == 0)
    throw std::runtime_error("config: catalog_chunks must be >= 1");
  if (cfg.shim_bytes >= cfg.chunk_size)
    throw std::runtime_error("config: shim_bytes must be below chunk_size");
  for (double a : cfg.alphas)
    if (a < 0.0) throw std::runtime_error("config: alpha must be >= 0");
  for (double s : cfg.smartre_scales)
    if (s <= 0.0 || s > 1.0)
      throw std::runtime_error("config: smartre scales must be in (0, 1]");
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(line_no) +
                               ": expected key = value");
    try {
      apply(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw std::runtime_error("config: line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  apply_env_overrides(cfg);
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, std::string>)
      out += items[i];
    else if constexpr (std::is_floating_point_v<T>)
      out += fmt_double(items[i]);
    else
      out += std::to_string(items[i]);
  }
  return out;
}

}  // namespace

std::string canonical_config_text(const ScenarioConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["topology"] = join(cfg.topologies);
  kv["level"] = cfg.level ? level_name(*cfg.level) : "file";
  kv["policy"] = join(cfg.policies);
  kv["cache_chunks"] = join(cfg.cache_chunks);
  kv["alpha"] = join(cfg.alphas);
  kv["pattern"] = join(cfg.patterns);
  kv["requests"] = std::to_string(cfg.requests);
  kv["warmup"] = fmt_double(cfg.warmup);
  kv["seeds"] = join(cfg.seeds);
  kv["catalog_chunks"] = std::to_string(cfg.catalog_chunks);
  kv["chunk_size"] = std::to_string(cfg.chunk_size);
  kv["servers"] = cfg.servers;
  kv["cachedbit_last_copy"] = cfg.cachedbit_last_copy ? "true" : "false";
  kv["nbsc_radius"] = std::to_string(cfg.nbsc_radius);
  kv["nbsc_exchange"] = std::to_string(cfg.nbsc_exchange);
  kv["nbsc_probe_every_hop"] = cfg.nbsc_probe_every_hop ? "true" : "false";
  kv["bloom_bits_per_chunk"] = std::to_string(cfg.bloom_bits_per_chunk);
  kv["bloom_hashes"] = std::to_string(cfg.bloom_hashes);
  kv["shim_bytes"] = std::to_string(cfg.shim_bytes);
  kv["smartre_window"] = std::to_string(cfg.smartre_window);
  kv["smartre_scales"] = join(cfg.smartre_scales);
  kv["smartre_capacity_mode"] = cfg.smartre_capacity_mode;
  kv["compare_left"] = join(cfg.compare_left);
  kv["compare_right"] = cfg.compare_right;
  kv["export_fulfillment"] = cfg.export_fulfillment ? "true" : "false";
  kv["export_traces"] = cfg.export_traces ? "true" : "false";
  kv["export_hop_cdf"] = cfg.export_hop_cdf ? "true" : "false";
  kv["rng"] = kRngAlgorithm;

  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  std::string text = canonical_config_text(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::size_t resolve_server_count(const ScenarioConfig& cfg,
                                 const Topology& topo) {
  if (cfg.servers == "auto") return topo.pop_count() < 40 ? 10 : 20;
  return static_cast<std::size_t>(std::stoull(cfg.servers));
}

}  // namespace redsim
