#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "redsim/topology.hpp"
#include "redsim/workload.hpp"

namespace redsim {

// Measured traffic per ingress-egress path. Data flows server -> client,
// so the server POP is the ingress and the client POP the egress.
struct PathStat {
  NodeId client = 0;
  NodeId server = 0;
  std::uint64_t vol_bytes = 0;
  std::uint64_t red_bytes = 0;  // bytes beyond the first copy of each chunk
};

struct RedundancyProfile {
  std::vector<PathStat> paths;  // sorted by (client, server)
  std::uint64_t window = 0;     // requests observed

  // Index of (client, server) in `paths`, or npos.
  std::size_t find(NodeId client, NodeId server) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Decoder placement: fraction of a path's redundant volume reconstituted
// at an on-path router. Aligned with RedundancyProfile::paths.
struct CachingManifest {
  struct Entry {
    NodeId router = 0;
    double fraction = 0.0;
  };
  std::vector<std::vector<Entry>> alloc;
};

struct ReOutcome {
  double baseline_bytes_hops = 0.0;
  double reduced_bytes_hops = 0.0;
  double reduction_fraction = 0.0;  // footprint basis
  double baseline_bytes = 0.0;
  double transferred_bytes = 0.0;
  double bandwidth_savings = 0.0;   // end-to-end byte basis
  double origin_served_fraction = 0.0;
};

// Counts, over the first `window` requests (0 = whole trace), the total and
// redundant bytes per client-server path. A chunk's bytes are redundant
// from its second appearance on the same path onward.
RedundancyProfile build_redundancy_profile(const std::vector<RequestEvent>& trace,
                                           std::uint64_t window,
                                           std::uint32_t chunk_size);

// Per-router decode capacities in bytes.
using Capacities = std::vector<double>;

// Smallest uniform per-router capacity under which every path can decode
// fully at its egress (the unconstrained optimum of the placement LP).
double ideal_uniform_capacity(const RedundancyProfile& profile);

// Capacities that can never bind; with them the LP reduces to decoding
// each path at its farthest on-path router.
Capacities nonbinding_capacities(const RedundancyProfile& profile,
                                 const PathTable& paths);

// Maximizes total redundant bytes times upstream decode distance, subject
// to per-path mass <= 1 and per-router byte capacity. Solved to optimality:
// an exact egress-placement certificate when capacities allow it, the
// simplex otherwise.
CachingManifest solve_manifest_lp(const RedundancyProfile& profile,
                                  const Capacities& capacities,
                                  const PathTable& paths);

// Fractional greedy by decode distance; runs without the LP machinery and
// respects both constraint families.
CachingManifest solve_manifest_greedy(const RedundancyProfile& profile,
                                      const Capacities& capacities,
                                      const PathTable& paths);

// Objective value of a manifest (red_bytes * fraction * decode distance).
double manifest_objective(const CachingManifest& m,
                          const RedundancyProfile& profile,
                          const PathTable& paths);

// Largest constraint violation across both families; <= 1e-6 after solve.
double manifest_residual(const CachingManifest& m,
                         const RedundancyProfile& profile,
                         const Capacities& capacities);

// Every request is served by the origin; the profiled redundant share of
// each path travels as shim bytes from the ingress to its decode routers.
// Accounting starts after `warmup` requests.
ReOutcome simulate_smartre(const std::vector<RequestEvent>& trace,
                           const CachingManifest& manifest,
                           const RedundancyProfile& profile,
                           const PathTable& paths, std::uint32_t chunk_size,
                           std::uint32_t shim_bytes, std::uint64_t warmup = 0);

// Per client-server pair LRU chunk memory at the client; a repeated chunk
// crosses the whole path as a shim. Caches warm during `warmup`.
ReOutcome simulate_endre(const std::vector<RequestEvent>& trace,
                         std::size_t pair_capacity_chunks,
                         const PathTable& paths, std::uint32_t chunk_size,
                         std::uint32_t shim_bytes, std::uint64_t warmup = 0);

void write_profile_csv(std::ostream& out, const RedundancyProfile& profile);
void write_manifest_csv(std::ostream& out, const CachingManifest& manifest);

}  // namespace redsim
