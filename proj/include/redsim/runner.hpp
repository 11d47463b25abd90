#pragma once

#include <memory>
#include <string>
#include <vector>

#include "redsim/cachenet.hpp"
#include "redsim/config.hpp"
#include "redsim/metrics.hpp"
#include "redsim/re.hpp"
#include "redsim/topology.hpp"
#include "redsim/workload.hpp"

namespace redsim {

// Owns a loaded topology together with its routing table.
class SimContext {
 public:
  explicit SimContext(Topology t) : topo_(std::move(t)), paths_(topo_) {}
  SimContext(const SimContext&) = delete;
  SimContext& operator=(const SimContext&) = delete;

  const Topology& topo() const { return topo_; }
  const PathTable& paths() const { return paths_; }

 private:
  Topology topo_;
  PathTable paths_;
};

struct ScenarioPoint {
  std::string topology;  // label
  Level level = Level::Pop;
  std::string policy;
  std::size_t cache_chunks = 0;
  double alpha = 0.0;
  std::string pattern;
};

std::string scenario_key(const ScenarioPoint& p);

// Cartesian product of the config axes, in config order.
std::vector<ScenarioPoint> expand_matrix(const ScenarioConfig& cfg,
                                         const std::vector<std::string>& topology_labels,
                                         const std::vector<Level>& topology_levels);

struct CachingRun {
  std::vector<FulfillmentRecord> records;  // full trace order
  std::size_t warmup_count = 0;
  MetricsReport report;                    // over the measured window
};

// Processes a freshly generated trace through a CR network and replays it
// uncached for the footprint baseline.
CachingRun run_caching(const SimContext& ctx, const Catalog& catalog,
                 const Placement& placement, TrafficPattern pattern,
                 std::size_t n_requests, std::uint64_t seed,
                 const CachenetOptions& opts, double warmup_fraction);

// Runs an existing trace through a fresh CR network.
std::vector<FulfillmentRecord> process_trace(
    const SimContext& ctx, const std::vector<RequestEvent>& trace,
    const CachenetOptions& opts, std::uint64_t admission_seed);

struct SeedOutcome {
  std::uint64_t seed = 0;
  double hit_rate = 0.0;
  double footprint_reduction = 0.0;
  double bandwidth_savings = 0.0;
};

struct ScenarioOutcome {
  ScenarioPoint point;
  std::vector<SeedOutcome> per_seed;
  SeedOutcome mean;    // seed field unused
  SeedOutcome spread;  // max - min per metric
};

// Runs one (scenario, seed) cell of the matrix.
SeedOutcome run_scenario_seed(const SimContext& ctx, const ScenarioConfig& cfg,
                              const ScenarioPoint& point, std::uint64_t seed,
                              const std::string& out_dir = "");

struct MatrixResult {
  std::vector<ScenarioOutcome> scenarios;
  std::string report_path;
};

// Executes the whole matrix and writes report.csv (one row per seed plus a
// mean row per scenario) and the configured companion files under out_dir.
// Cells may run on `parallel` worker threads; outputs are identical either
// way.
MatrixResult run_matrix(const ScenarioConfig& cfg, const std::string& out_dir,
                        int parallel = 1);

struct CompareRow {
  std::string topology;
  Level level = Level::Pop;
  std::size_t cache_chunks = 0;
  std::string policy;
  double policy_reduction = 0.0;
  std::string reference;
  double reference_reduction = 0.0;
  bool ratio_defined = false;
  double ratio = 0.0;
};

// Joins footprint reductions of the caching policies and the reference RE
// policy on the shared capacity axis (chunks <-> bytes via chunk_size).
std::vector<CompareRow> compare_policies(const ScenarioConfig& cfg,
                                         const std::string& out_dir);

// Minimal SVG chart of a report.csv metric; cosmetic output.
void plot_report(const std::string& report_csv, const std::string& out_svg,
                 const std::string& metric = "hit_rate");

}  // namespace redsim
