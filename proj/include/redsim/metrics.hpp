#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "redsim/cachenet.hpp"

namespace redsim {

// Fraction of requests served by a CR (on-path or neighbor).
double hit_rate(std::span<const FulfillmentRecord> records);

// Cumulative distribution of hop counts over hit records only; empty when
// there are no hits.
std::vector<std::pair<std::uint32_t, double>> hop_cdf(
    std::span<const FulfillmentRecord> records);

std::uint64_t total_bytes_hops(std::span<const FulfillmentRecord> records);

// 1 - reduced/baseline, where baseline replays the same trace uncached.
double footprint_reduction(double reduced_bytes_hops,
                           double baseline_bytes_hops);

struct MetricsReport {
  double hit_rate = 0.0;
  std::vector<std::pair<std::uint32_t, double>> hop_cdf;
  double baseline_bytes_hops = 0.0;
  double reduced_bytes_hops = 0.0;
  double footprint_reduction = 0.0;
  double bandwidth_savings = 0.0;  // external byte savings
  std::map<std::string, std::string> metadata;
};

void write_fulfillment_csv(std::ostream& out,
                           std::span<const FulfillmentRecord> records);
void write_hop_cdf_csv(
    std::ostream& out,
    const std::vector<std::pair<std::uint32_t, double>>& cdf);

}  // namespace redsim
