#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "redsim/rng.hpp"
#include "redsim/topology.hpp"

namespace redsim {

// Permanent content identifier: a pure function of the catalog rank.
std::uint64_t chunk_digest(std::uint32_t rank);

struct ChunkId {
  std::uint32_t rank = 0;
  std::uint64_t digest = 0;
};

// Zipf popularity table: weight of rank i (0-based) proportional to
// 1/(i+1)^alpha, normalized to sum 1.
struct Catalog {
  std::size_t n_chunks = 0;
  std::uint32_t chunk_size = 0;  // bytes
  double alpha = 0.0;
  std::vector<double> weights;     // strictly non-increasing for alpha > 0
  std::vector<double> cumulative;  // cumulative[i] = sum of weights[0..i]

  ChunkId chunk(std::uint32_t rank) const {
    return ChunkId{rank, chunk_digest(rank)};
  }
};

Catalog build_catalog(std::size_t n_chunks, double alpha,
                      std::uint32_t chunk_size);

struct RequestEvent {
  std::uint64_t seq = 0;
  NodeId client = 0;
  NodeId server = 0;
  ChunkId chunk;
};

enum class TrafficPattern { Constant, Gravity };

const char* pattern_name(TrafficPattern p);

// Draws request events. Constant picks client and server uniformly over
// their sets; gravity weighs each endpoint by its node degree, so the pair
// probability is proportional to degree(client) * degree(server).
class RequestSampler {
 public:
  RequestSampler(const Catalog& catalog, const Placement& placement,
                 const Topology& topology, TrafficPattern pattern,
                 std::uint64_t seed);

  RequestEvent next();

 private:
  NodeId draw(const std::vector<NodeId>& nodes,
              const std::vector<double>& cdf);

  const Catalog& catalog_;
  Placement placement_;
  TrafficPattern pattern_;
  std::vector<double> client_cdf_;  // gravity only
  std::vector<double> server_cdf_;
  SplitMix64 rng_;
  std::uint64_t seq_ = 0;
};

// Deterministic in (catalog, placement, pattern, n_requests, seed).
std::vector<RequestEvent> generate_trace(const Catalog& catalog,
                                         const Placement& placement,
                                         const Topology& topology,
                                         TrafficPattern pattern,
                                         std::size_t n_requests,
                                         std::uint64_t seed);

void write_trace_csv(std::ostream& out, const std::vector<RequestEvent>& trace);

}  // namespace redsim
