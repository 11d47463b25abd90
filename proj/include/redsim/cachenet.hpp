#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

#include "redsim/rng.hpp"
#include "redsim/topology.hpp"
#include "redsim/workload.hpp"

namespace redsim {

enum class Policy { None, All, Cachedbit, NeighborSearch };

const char* policy_name(Policy p);
std::optional<Policy> parse_policy(const std::string& text);

// Set summary with no false negatives for elements inserted since the last
// clear(). m == 0 degenerates to an always-empty filter.
class BloomDigest {
 public:
  BloomDigest() = default;
  BloomDigest(std::uint32_t m_bits, std::uint32_t k_hashes);

  void insert(std::uint64_t digest);
  bool query(std::uint64_t digest) const;
  void clear();

  std::uint32_t bit_count() const { return m_; }
  std::uint32_t hash_count() const { return k_; }
  std::size_t inserted() const { return inserted_; }

 private:
  std::uint32_t m_ = 0;
  std::uint32_t k_ = 0;
  std::size_t inserted_ = 0;
  std::vector<std::uint64_t> words_;
};

// Bounded chunk store with least-recently-used eviction.
class LruStore {
 public:
  explicit LruStore(std::size_t capacity) : capacity_(capacity) {}

  bool contains(std::uint32_t rank) const { return index_.count(rank) != 0; }

  // Moves rank to most-recent; false if absent.
  bool touch(std::uint32_t rank);

  // Inserts at most-recent. Returns the evicted rank when a full store had
  // to drop its least-recent member; an already-present rank is a touch.
  std::optional<std::uint32_t> insert(std::uint32_t rank);

  std::size_t size() const { return order_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::list<std::uint32_t>& recency() const { return order_; }  // MRU first

 private:
  std::size_t capacity_;
  std::list<std::uint32_t> order_;
  std::unordered_map<std::uint32_t, std::list<std::uint32_t>::iterator> index_;
};

// One content router: bounded store plus the digest it last published.
struct CrState {
  NodeId node = 0;
  LruStore store;
  BloomDigest published;

  CrState(NodeId n, std::size_t capacity, std::uint32_t bloom_bits,
          std::uint32_t bloom_hashes)
      : node(n), store(capacity), published(bloom_bits, bloom_hashes) {}
};

enum class HitKind { Origin, Cr, Neighbor };

const char* hit_name(HitKind h);

struct FulfillmentRecord {
  RequestEvent request;
  HitKind hit = HitKind::Origin;
  NodeId serving_node = 0;
  std::uint32_t hops = 0;        // client to serving point, plus any detour
  std::uint64_t bytes_hops = 0;  // data bytes times hops traversed
};

struct CachenetOptions {
  Policy policy = Policy::All;
  std::size_t capacity_chunks = 0;  // per content router
  std::uint32_t chunk_size = 1024;  // bytes
  bool cachedbit_last_copy = true;  // forced copy at the CR nearest the client
  std::uint32_t nbsc_radius = 1;
  std::uint64_t exchange_period = 1000;  // digest rebuild, in requests
  bool nbsc_probe_every_hop = true;      // false: probe only at the last CR
  std::uint32_t bloom_bits_per_chunk = 16;
  std::uint32_t bloom_hashes = 4;
};

// The CR network for one scenario run. Requests are processed strictly in
// sequence; the walk goes client -> server so the copy nearest the client
// wins, and admission runs on the response path back to the client.
class CrNetwork {
 public:
  CrNetwork(const PathTable& paths, const CachenetOptions& opts,
            std::uint64_t admission_seed);

  FulfillmentRecord process(const RequestEvent& ev);

  // Admission primitives, exposed for direct drive in tests. `crs` is the
  // response path in serving-point -> client order, client excluded.
  void admit_all(const std::vector<NodeId>& crs, const ChunkId& chunk);
  // Returns the number of newly stored copies (at most 2: one probabilistic
  // plus the forced last-CR copy). The store probability is 1/path_hops;
  // zero means "use the response list length", which is the same thing for
  // responses coming from the origin.
  int admit_cachedbit(const std::vector<NodeId>& crs, const ChunkId& chunk,
                      bool cached_bit_on_arrival = false,
                      std::size_t path_hops = 0);

  // Probes published digests of CRs within the radius of `at`, ascending
  // node id, skipping `exclude`; digest hits are verified against the live
  // store. Returns the holder and its detour distance.
  struct NeighborHit {
    NodeId node;
    std::uint32_t detour_dist;
  };
  std::optional<NeighborHit> neighbor_lookup(
      NodeId at, const ChunkId& chunk,
      const std::vector<NodeId>& exclude) const;

  // Rebuilds and publishes every CR's digest from its current store.
  void exchange_digests();

  CrState& cr(NodeId v) { return crs_[v]; }
  const CrState& cr(NodeId v) const { return crs_[v]; }
  std::uint64_t processed() const { return processed_; }
  const CachenetOptions& options() const { return opts_; }

  // Test hook: replaces the admission generator's draws with a scripted
  // sequence (consumed in order; exhausting it is an error).
  void force_admission_draws(std::vector<double> draws);

 private:
  double admission_draw();

  const PathTable& paths_;
  CachenetOptions opts_;
  std::vector<CrState> crs_;
  std::vector<std::vector<NeighborHit>> neighborhood_;  // per node, id-ascending
  SplitMix64 rng_;
  std::vector<double> forced_draws_;
  std::size_t forced_pos_ = 0;
  std::uint64_t processed_ = 0;
};

}  // namespace redsim
