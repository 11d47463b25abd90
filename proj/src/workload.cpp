#include "redsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace redsim {

std::uint64_t chunk_digest(std::uint32_t rank) {
  // FNV-1a over the literal identifier "chunk:<rank>".
  std::string key = "chunk:" + std::to_string(rank);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const char* pattern_name(TrafficPattern p) {
  return p == TrafficPattern::Constant ? "constant" : "gravity";
}

Catalog build_catalog(std::size_t n_chunks, double alpha,
                      std::uint32_t chunk_size) {
  if (n_chunks == 0) throw std::runtime_error("catalog: n_chunks must be >= 1");
  if (alpha < 0.0) throw std::runtime_error("catalog: alpha must be >= 0");
  if (chunk_size == 0)
    throw std::runtime_error("catalog: chunk_size must be >= 1");

  Catalog cat;
  cat.n_chunks = n_chunks;
  cat.chunk_size = chunk_size;
  cat.alpha = alpha;
  cat.weights.resize(n_chunks);
  cat.cumulative.resize(n_chunks);

  // Long-double accumulation keeps the normalized sum within 1e-12 of one
  // even for 1e5-entry catalogs.
  long double norm = 0.0L;
  for (std::size_t i = 0; i < n_chunks; ++i) {
    cat.weights[i] = std::pow(static_cast<double>(i + 1), -alpha);
    norm += cat.weights[i];
  }
  long double running = 0.0L;
  for (std::size_t i = 0; i < n_chunks; ++i) {
    cat.weights[i] = static_cast<double>(cat.weights[i] / norm);
    running += cat.weights[i];
    cat.cumulative[i] = static_cast<double>(running);
  }
  cat.cumulative.back() = 1.0;
  return cat;
}

RequestSampler::RequestSampler(const Catalog& catalog,
                               const Placement& placement,
                               const Topology& topology,
                               TrafficPattern pattern, std::uint64_t seed)
    : catalog_(catalog),
      placement_(placement),
      pattern_(pattern),
      rng_(seed) {
  if (placement_.clients.empty() || placement_.servers.empty())
    throw std::runtime_error("sampler: placement must be non-empty");
  if (pattern_ == TrafficPattern::Gravity) {
    // Pair probability factorizes, so each endpoint gets its own
    // degree-weighted table.
    auto build_cdf = [&](const std::vector<NodeId>& nodes) {
      std::vector<double> cdf(nodes.size());
      double total = 0.0;
      for (NodeId v : nodes) total += static_cast<double>(topology.degree(v));
      double running = 0.0;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        running += static_cast<double>(topology.degree(nodes[i])) / total;
        cdf[i] = running;
      }
      cdf.back() = 1.0;
      return cdf;
    };
    client_cdf_ = build_cdf(placement_.clients);
    server_cdf_ = build_cdf(placement_.servers);
  }
}

NodeId RequestSampler::draw(const std::vector<NodeId>& nodes,
                            const std::vector<double>& cdf) {
  if (pattern_ == TrafficPattern::Constant)
    return nodes[rng_.next_below(nodes.size())];
  double u = rng_.next_double();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return nodes[static_cast<std::size_t>(it - cdf.begin())];
}

RequestEvent RequestSampler::next() {
  RequestEvent ev;
  ev.seq = seq_++;
  double u = rng_.next_double();
  auto it = std::upper_bound(catalog_.cumulative.begin(),
                             catalog_.cumulative.end(), u);
  if (it == catalog_.cumulative.end()) --it;
  auto rank =
      static_cast<std::uint32_t>(it - catalog_.cumulative.begin());
  ev.chunk = catalog_.chunk(rank);
  ev.client = draw(placement_.clients, client_cdf_);
  ev.server = draw(placement_.servers, server_cdf_);
  return ev;
}

std::vector<RequestEvent> generate_trace(const Catalog& catalog,
                                         const Placement& placement,
                                         const Topology& topology,
                                         TrafficPattern pattern,
                                         std::size_t n_requests,
                                         std::uint64_t seed) {
  if (n_requests == 0)
    throw std::runtime_error("trace: n_requests must be >= 1");
  RequestSampler sampler(catalog, placement, topology, pattern, seed);
  std::vector<RequestEvent> trace;
  trace.reserve(n_requests);
  for (std::size_t i = 0; i < n_requests; ++i) trace.push_back(sampler.next());
  return trace;
}

void write_trace_csv(std::ostream& out,
                     const std::vector<RequestEvent>& trace) {
  out << "seq,client,server,rank\n";
  for (const auto& ev : trace)
    out << ev.seq << "," << ev.client << "," << ev.server << ","
        << ev.chunk.rank << "\n";
}

}  // namespace redsim
