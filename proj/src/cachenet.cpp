#include "redsim/cachenet.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

namespace redsim {

const char* policy_name(Policy p) {
  switch (p) {
    case Policy::None: return "none";
    case Policy::All: return "all";
    case Policy::Cachedbit: return "cachedbit";
    case Policy::NeighborSearch: return "nbsc";
  }
  return "?";
}

std::optional<Policy> parse_policy(const std::string& text) {
  if (text == "none") return Policy::None;
  if (text == "all") return Policy::All;
  if (text == "cachedbit") return Policy::Cachedbit;
  if (text == "nbsc") return Policy::NeighborSearch;
  return std::nullopt;
}

const char* hit_name(HitKind h) {
  switch (h) {
    case HitKind::Origin: return "origin";
    case HitKind::Cr: return "cr";
    case HitKind::Neighbor: return "neighbor";
  }
  return "?";
}

BloomDigest::BloomDigest(std::uint32_t m_bits, std::uint32_t k_hashes)
    : m_(m_bits), k_(k_hashes), words_((m_bits + 63) / 64, 0) {}

void BloomDigest::insert(std::uint64_t digest) {
  if (m_ == 0) return;
  std::uint64_t h1 = mix64(digest);
  std::uint64_t h2 = mix64(digest ^ 0x5bd1e995u) | 1;
  for (std::uint32_t i = 0; i < k_; ++i) {
    std::uint64_t bit = (h1 + i * h2) % m_;
    words_[bit >> 6] |= 1ULL << (bit & 63);
  }
  ++inserted_;
}

bool BloomDigest::query(std::uint64_t digest) const {
  if (m_ == 0) return false;
  std::uint64_t h1 = mix64(digest);
  std::uint64_t h2 = mix64(digest ^ 0x5bd1e995u) | 1;
  for (std::uint32_t i = 0; i < k_; ++i) {
    std::uint64_t bit = (h1 + i * h2) % m_;
    if (!(words_[bit >> 6] & (1ULL << (bit & 63)))) return false;
  }
  return true;
}

void BloomDigest::clear() {
  std::fill(words_.begin(), words_.end(), 0);
  inserted_ = 0;
}

bool LruStore::touch(std::uint32_t rank) {
  auto it = index_.find(rank);
  if (it == index_.end()) return false;
  order_.splice(order_.begin(), order_, it->second);
  return true;
}

std::optional<std::uint32_t> LruStore::insert(std::uint32_t rank) {
  if (touch(rank)) return std::nullopt;
  if (capacity_ == 0) return std::nullopt;
  std::optional<std::uint32_t> evicted;
  if (order_.size() == capacity_) {
    evicted = order_.back();
    index_.erase(order_.back());
    order_.pop_back();
  }
  order_.push_front(rank);
  index_[rank] = order_.begin();
  return evicted;
}

CrNetwork::CrNetwork(const PathTable& paths, const CachenetOptions& opts,
                     std::uint64_t admission_seed)
    : paths_(paths), opts_(opts), rng_(SplitMix64(admission_seed).split(0xadu)) {
  const Topology& t = paths.topology();
  std::uint64_t bloom_bits =
      static_cast<std::uint64_t>(opts.bloom_bits_per_chunk) *
      opts.capacity_chunks;
  crs_.reserve(t.node_count());
  for (NodeId v = 0; v < t.node_count(); ++v)
    crs_.emplace_back(v, opts.capacity_chunks,
                      static_cast<std::uint32_t>(bloom_bits),
                      opts.bloom_hashes);

  if (opts.policy == Policy::NeighborSearch) {
    if (opts.nbsc_radius == 0)
      throw std::runtime_error("cachenet: nbsc radius must be >= 1");
    // Precompute the in-radius neighborhood per node, ascending id.
    neighborhood_.resize(t.node_count());
    for (NodeId v = 0; v < t.node_count(); ++v) {
      std::vector<std::uint32_t> dist(t.node_count(), 0xffffffffu);
      std::deque<NodeId> queue{v};
      dist[v] = 0;
      while (!queue.empty()) {
        NodeId x = queue.front();
        queue.pop_front();
        if (dist[x] == opts.nbsc_radius) continue;
        for (NodeId w : t.adj[x])
          if (dist[w] == 0xffffffffu) {
            dist[w] = dist[x] + 1;
            queue.push_back(w);
          }
      }
      for (NodeId w = 0; w < t.node_count(); ++w)
        if (w != v && dist[w] != 0xffffffffu)
          neighborhood_[v].push_back({w, dist[w]});
    }
  }
}

void CrNetwork::force_admission_draws(std::vector<double> draws) {
  forced_draws_ = std::move(draws);
  forced_pos_ = 0;
}

double CrNetwork::admission_draw() {
  if (!forced_draws_.empty()) {
    if (forced_pos_ >= forced_draws_.size())
      throw std::runtime_error("cachenet: scripted draws exhausted");
    return forced_draws_[forced_pos_++];
  }
  return rng_.next_double();
}

void CrNetwork::admit_all(const std::vector<NodeId>& crs,
                          const ChunkId& chunk) {
  for (NodeId v : crs) {
    crs_[v].store.insert(chunk.rank);
    assert(crs_[v].store.size() <= opts_.capacity_chunks);
  }
}

int CrNetwork::admit_cachedbit(const std::vector<NodeId>& crs,
                               const ChunkId& chunk,
                               bool cached_bit_on_arrival,
                               std::size_t path_hops) {
  const std::size_t n = crs.size();
  if (n == 0) return 0;
  if (path_hops == 0) path_hops = n;
  bool cached_bit = cached_bit_on_arrival;
  int stored = 0;
  const double p = 1.0 / static_cast<double>(path_hops);
  for (std::size_t i = 0; i < n; ++i) {
    const bool last = (i + 1 == n);
    if (last && opts_.cachedbit_last_copy) {
      if (!crs_[crs[i]].store.contains(chunk.rank)) ++stored;
      crs_[crs[i]].store.insert(chunk.rank);
    } else if (!cached_bit && admission_draw() < p) {
      if (!crs_[crs[i]].store.contains(chunk.rank)) ++stored;
      crs_[crs[i]].store.insert(chunk.rank);
      cached_bit = true;
    }
    assert(crs_[crs[i]].store.size() <= opts_.capacity_chunks);
  }
  assert(stored <= 2);
  return stored;
}

std::optional<CrNetwork::NeighborHit> CrNetwork::neighbor_lookup(
    NodeId at, const ChunkId& chunk,
    const std::vector<NodeId>& exclude) const {
  if (neighborhood_.empty()) return std::nullopt;  // non-nbsc network
  for (const NeighborHit& cand : neighborhood_[at]) {
    if (std::find(exclude.begin(), exclude.end(), cand.node) != exclude.end())
      continue;
    if (!crs_[cand.node].published.query(chunk.digest)) continue;
    // A stale or false-positive digest falls through to the next candidate.
    if (crs_[cand.node].store.contains(chunk.rank)) return cand;
  }
  return std::nullopt;
}

void CrNetwork::exchange_digests() {
  for (CrState& cr : crs_) {
    cr.published.clear();
    for (std::uint32_t rank : cr.store.recency())
      cr.published.insert(chunk_digest(rank));
  }
}

FulfillmentRecord CrNetwork::process(const RequestEvent& ev) {
  const std::vector<NodeId> path = paths_.shortest_path(ev.client, ev.server);
  const std::size_t d = path.size() - 1;  // hop length, >= 1

  // Walk toward the server. The client's own node forwards but is not
  // consulted for its own requests; CR positions are path[1..d].
  FulfillmentRecord rec;
  rec.request = ev;
  std::size_t serve_pos = d;
  std::uint32_t detour = 0;
  rec.hit = HitKind::Origin;
  rec.serving_node = ev.server;

  if (opts_.policy != Policy::None) {
    for (std::size_t j = 1; j <= d; ++j) {
      NodeId node = path[j];
      if (crs_[node].store.touch(ev.chunk.rank)) {
        rec.hit = HitKind::Cr;
        rec.serving_node = node;
        serve_pos = j;
        break;
      }
      if (opts_.policy == Policy::NeighborSearch &&
          (opts_.nbsc_probe_every_hop || j == d)) {
        auto hit = neighbor_lookup(node, ev.chunk, path);
        if (hit) {
          crs_[hit->node].store.touch(ev.chunk.rank);
          rec.hit = HitKind::Neighbor;
          rec.serving_node = hit->node;
          serve_pos = j;
          detour = 2 * hit->detour_dist;
          break;
        }
      }
    }
  }

  rec.hops = static_cast<std::uint32_t>(serve_pos) + detour;
  rec.bytes_hops = static_cast<std::uint64_t>(opts_.chunk_size) * rec.hops;

  // Response path back to the client. The serving CR already holds the
  // chunk; a neighbor hit re-enters the path at the probing position.
  std::vector<NodeId> response;
  std::size_t first = (rec.hit == HitKind::Cr) ? serve_pos - 1 : serve_pos;
  response.reserve(first);
  for (std::size_t j = first; j >= 1; --j) response.push_back(path[j]);

  switch (opts_.policy) {
    case Policy::None:
      break;
    case Policy::All:
      admit_all(response, ev.chunk);
      break;
    case Policy::Cachedbit:
    case Policy::NeighborSearch:
      // The store probability follows the full client-server path length,
      // whatever stretch of it the response actually covers.
      admit_cachedbit(response, ev.chunk, false, d);
      break;
  }

  ++processed_;
  if (opts_.policy == Policy::NeighborSearch &&
      processed_ % opts_.exchange_period == 0)
    exchange_digests();
  return rec;
}

}  // namespace redsim
