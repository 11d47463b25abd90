#include "redsim/metrics.hpp"

#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

namespace redsim {

double hit_rate(std::span<const FulfillmentRecord> records) {
  if (records.empty()) throw std::runtime_error("metrics: no records");
  std::uint64_t hits = 0;
  for (const auto& r : records)
    if (r.hit != HitKind::Origin) ++hits;
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

std::vector<std::pair<std::uint32_t, double>> hop_cdf(
    std::span<const FulfillmentRecord> records) {
  std::map<std::uint32_t, std::uint64_t> counts;
  std::uint64_t hits = 0;
  for (const auto& r : records) {
    if (r.hit == HitKind::Origin) continue;
    ++counts[r.hops];
    ++hits;
  }
  std::vector<std::pair<std::uint32_t, double>> cdf;
  if (hits == 0) return cdf;
  std::uint64_t running = 0;
  for (const auto& [hops, n] : counts) {
    running += n;
    cdf.emplace_back(hops,
                     static_cast<double>(running) / static_cast<double>(hits));
  }
  cdf.back().second = 1.0;
  return cdf;
}

std::uint64_t total_bytes_hops(std::span<const FulfillmentRecord> records) {
  std::uint64_t total = 0;
  for (const auto& r : records) total += r.bytes_hops;
  return total;
}

double footprint_reduction(double reduced_bytes_hops,
                           double baseline_bytes_hops) {
  if (baseline_bytes_hops <= 0.0)
    throw std::runtime_error("metrics: baseline footprint must be positive");
  return 1.0 - reduced_bytes_hops / baseline_bytes_hops;
}

void write_fulfillment_csv(std::ostream& out,
                           std::span<const FulfillmentRecord> records) {
  out << "seq,hit,serving_node,hops,bytes_hops\n";
  for (const auto& r : records)
    out << r.request.seq << "," << hit_name(r.hit) << "," << r.serving_node
        << "," << r.hops << "," << r.bytes_hops << "\n";
}

void write_hop_cdf_csv(
    std::ostream& out,
    const std::vector<std::pair<std::uint32_t, double>>& cdf) {
  char buf[32];
  out << "hops,cum_fraction\n";
  for (const auto& [hops, frac] : cdf) {
    std::snprintf(buf, sizeof buf, "%.9f", frac);
    out << hops << "," << buf << "\n";
  }
}

}  // namespace redsim
