#include "redsim/re.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "redsim/cachenet.hpp"
#include "redsim/lp.hpp"

namespace redsim {

namespace {

// Decode candidates for one path, upstream distance from the ingress
// (server). The ingress itself is excluded; the egress (client) carries
// the maximum distance.
struct Candidate {
  NodeId router;
  std::uint32_t dist;
};

std::vector<Candidate> decode_candidates(const PathTable& paths,
                                         const PathStat& stat) {
  std::vector<NodeId> path = paths.shortest_path(stat.client, stat.server);
  const std::uint32_t d = static_cast<std::uint32_t>(path.size() - 1);
  std::vector<Candidate> out;
  out.reserve(d);
  for (std::uint32_t j = 0; j < d; ++j)
    out.push_back({path[j], d - j});  // j = 0 is the client/egress
  return out;
}

std::uint64_t pair_key(NodeId client, NodeId server) {
  return (static_cast<std::uint64_t>(client) << 32) | server;
}

}  // namespace

std::size_t RedundancyProfile::find(NodeId client, NodeId server) const {
  PathStat probe;
  probe.client = client;
  probe.server = server;
  auto it = std::lower_bound(paths.begin(), paths.end(), probe,
                             [](const PathStat& a, const PathStat& b) {
                               if (a.client != b.client)
                                 return a.client < b.client;
                               return a.server < b.server;
                             });
  if (it != paths.end() && it->client == client && it->server == server)
    return static_cast<std::size_t>(it - paths.begin());
  return npos;
}

RedundancyProfile build_redundancy_profile(
    const std::vector<RequestEvent>& trace, std::uint64_t window,
    std::uint32_t chunk_size) {
  if (window == 0 || window > trace.size()) window = trace.size();
  if (window == 0)
    throw std::runtime_error("profile: empty trace");

  struct Counter {
    std::uint64_t total = 0;
    std::uint64_t repeats = 0;
    std::unordered_map<std::uint32_t, std::uint32_t> seen;
  };
  std::map<std::uint64_t, Counter> per_pair;
  for (std::uint64_t i = 0; i < window; ++i) {
    const RequestEvent& ev = trace[i];
    Counter& c = per_pair[pair_key(ev.client, ev.server)];
    ++c.total;
    if (++c.seen[ev.chunk.rank] > 1) ++c.repeats;
  }

  RedundancyProfile profile;
  profile.window = window;
  profile.paths.reserve(per_pair.size());
  for (const auto& [key, c] : per_pair) {
    PathStat s;
    s.client = static_cast<NodeId>(key >> 32);
    s.server = static_cast<NodeId>(key & 0xffffffffu);
    s.vol_bytes = c.total * chunk_size;
    s.red_bytes = c.repeats * chunk_size;
    profile.paths.push_back(s);
  }
  // std::map iteration is already (client, server) ordered.
  return profile;
}

double ideal_uniform_capacity(const RedundancyProfile& profile) {
  std::unordered_map<NodeId, double> egress_load;
  for (const PathStat& s : profile.paths)
    egress_load[s.client] += static_cast<double>(s.red_bytes);
  double worst = 0.0;
  for (const auto& [node, load] : egress_load) worst = std::max(worst, load);
  return worst;
}

Capacities nonbinding_capacities(const RedundancyProfile& profile,
                                 const PathTable& paths) {
  Capacities caps(paths.topology().node_count(), 0.0);
  for (const PathStat& s : profile.paths)
    for (const Candidate& c : decode_candidates(paths, s))
      caps[c.router] += static_cast<double>(s.red_bytes);
  return caps;
}

CachingManifest solve_manifest_lp(const RedundancyProfile& profile,
                                  const Capacities& capacities,
                                  const PathTable& paths) {
  const std::size_t n_paths = profile.paths.size();
  for (double c : capacities)
    if (c < 0.0) throw std::runtime_error("manifest: negative capacity");

  CachingManifest manifest;
  manifest.alloc.resize(n_paths);

  // Upper bound certificate: decoding everything at the egress is optimal
  // whenever it fits, since the egress carries the maximum distance.
  std::vector<double> egress_load(capacities.size(), 0.0);
  bool egress_fits = true;
  for (const PathStat& s : profile.paths)
    egress_load[s.client] += static_cast<double>(s.red_bytes);
  for (std::size_t r = 0; r < capacities.size(); ++r)
    if (egress_load[r] > capacities[r] + 1e-9) {
      egress_fits = false;
      break;
    }
  if (egress_fits) {
    for (std::size_t p = 0; p < n_paths; ++p)
      if (profile.paths[p].red_bytes > 0)
        manifest.alloc[p].push_back({profile.paths[p].client, 1.0});
    return manifest;
  }

  // Transportation form over y[p][r] = decoded bytes: unit coefficients,
  // objective weight = decode distance.
  struct Var {
    std::size_t path;
    NodeId router;
    std::uint32_t dist;
  };
  std::vector<Var> vars;
  std::vector<LpProblem::Row> path_rows(n_paths);
  std::unordered_map<NodeId, std::vector<std::size_t>> router_vars;

  // Routers whose capacity cannot bind get no constraint row.
  std::vector<double> potential(capacities.size(), 0.0);

  for (std::size_t p = 0; p < n_paths; ++p) {
    const PathStat& s = profile.paths[p];
    if (s.red_bytes == 0) continue;
    for (const Candidate& c : decode_candidates(paths, s)) {
      if (capacities[c.router] <= 0.0) continue;
      std::size_t j = vars.size();
      vars.push_back({p, c.router, c.dist});
      path_rows[p].terms.emplace_back(j, 1.0);
      router_vars[c.router].push_back(j);
      potential[c.router] += static_cast<double>(s.red_bytes);
    }
  }

  LpProblem lp;
  lp.n_vars = vars.size();
  lp.objective.resize(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j)
    lp.objective[j] = static_cast<double>(vars[j].dist);
  for (std::size_t p = 0; p < n_paths; ++p) {
    if (path_rows[p].terms.empty()) continue;
    path_rows[p].rhs = static_cast<double>(profile.paths[p].red_bytes);
    lp.rows.push_back(std::move(path_rows[p]));
  }
  for (auto& [router, cols] : router_vars) {
    if (potential[router] <= capacities[router]) continue;  // cannot bind
    LpProblem::Row row;
    row.rhs = capacities[router];
    for (std::size_t j : cols) row.terms.emplace_back(j, 1.0);
    lp.rows.push_back(std::move(row));
  }

  LpSolution sol = solve_lp(lp);
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (sol.values[j] <= 0.0) continue;
    double frac = sol.values[j] /
                  static_cast<double>(profile.paths[vars[j].path].red_bytes);
    manifest.alloc[vars[j].path].push_back({vars[j].router, frac});
  }
  for (auto& entries : manifest.alloc)
    std::sort(entries.begin(), entries.end(),
              [](const CachingManifest::Entry& a,
                 const CachingManifest::Entry& b) { return a.router < b.router; });
  return manifest;
}

CachingManifest solve_manifest_greedy(const RedundancyProfile& profile,
                                      const Capacities& capacities,
                                      const PathTable& paths) {
  for (double c : capacities)
    if (c < 0.0) throw std::runtime_error("manifest: negative capacity");

  struct Cell {
    std::size_t path;
    NodeId router;
    std::uint32_t dist;
  };
  std::vector<Cell> cells;
  for (std::size_t p = 0; p < profile.paths.size(); ++p) {
    const PathStat& s = profile.paths[p];
    if (s.red_bytes == 0) continue;
    for (const Candidate& c : decode_candidates(paths, s))
      cells.push_back({p, c.router, c.dist});
  }
  // Highest per-byte saving first; deterministic ties.
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.dist != b.dist) return a.dist > b.dist;
    if (a.path != b.path) return a.path < b.path;
    return a.router < b.router;
  });

  Capacities remaining_cap = capacities;
  std::vector<double> remaining_supply(profile.paths.size());
  for (std::size_t p = 0; p < profile.paths.size(); ++p)
    remaining_supply[p] = static_cast<double>(profile.paths[p].red_bytes);

  CachingManifest manifest;
  manifest.alloc.resize(profile.paths.size());
  for (const Cell& c : cells) {
    double take = std::min(remaining_supply[c.path], remaining_cap[c.router]);
    if (take <= 0.0) continue;
    remaining_supply[c.path] -= take;
    remaining_cap[c.router] -= take;
    manifest.alloc[c.path].push_back(
        {c.router, take / static_cast<double>(profile.paths[c.path].red_bytes)});
  }
  for (auto& entries : manifest.alloc)
    std::sort(entries.begin(), entries.end(),
              [](const CachingManifest::Entry& a,
                 const CachingManifest::Entry& b) { return a.router < b.router; });
  return manifest;
}

double manifest_objective(const CachingManifest& m,
                          const RedundancyProfile& profile,
                          const PathTable& paths) {
  double total = 0.0;
  for (std::size_t p = 0; p < profile.paths.size(); ++p) {
    const PathStat& s = profile.paths[p];
    for (const CachingManifest::Entry& e : m.alloc[p])
      total += static_cast<double>(s.red_bytes) * e.fraction *
               paths.distance(s.server, e.router);
  }
  return total;
}

double manifest_residual(const CachingManifest& m,
                         const RedundancyProfile& profile,
                         const Capacities& capacities) {
  double worst = 0.0;
  std::vector<double> router_load(capacities.size(), 0.0);
  for (std::size_t p = 0; p < profile.paths.size(); ++p) {
    double mass = 0.0;
    for (const CachingManifest::Entry& e : m.alloc[p]) {
      if (e.fraction < 0.0) worst = std::max(worst, -e.fraction);
      mass += e.fraction;
      router_load[e.router] +=
          e.fraction * static_cast<double>(profile.paths[p].red_bytes);
    }
    worst = std::max(worst, mass - 1.0);
  }
  // Capacity slack normalized so the residual is comparable to fractions.
  for (std::size_t r = 0; r < capacities.size(); ++r) {
    double over = router_load[r] - capacities[r];
    if (over > 0.0)
      worst = std::max(worst, over / std::max(1.0, capacities[r]));
  }
  return worst;
}

ReOutcome simulate_smartre(const std::vector<RequestEvent>& trace,
                           const CachingManifest& manifest,
                           const RedundancyProfile& profile,
                           const PathTable& paths, std::uint32_t chunk_size,
                           std::uint32_t shim_bytes, std::uint64_t warmup) {
  if (shim_bytes >= chunk_size)
    throw std::runtime_error("smartre: shim must be smaller than a chunk");

  // Per-path saving for one request = redundant share * sum over decode
  // routers of fraction * (chunk - shim) * upstream distance.
  std::vector<double> saving_per_request(profile.paths.size(), 0.0);
  for (std::size_t p = 0; p < profile.paths.size(); ++p) {
    const PathStat& s = profile.paths[p];
    if (s.vol_bytes == 0 || s.red_bytes == 0) continue;
    double rho = static_cast<double>(s.red_bytes) /
                 static_cast<double>(s.vol_bytes);
    double per_chunk = 0.0;
    for (const CachingManifest::Entry& e : manifest.alloc[p])
      per_chunk += e.fraction *
                   static_cast<double>(chunk_size - shim_bytes) *
                   paths.distance(s.server, e.router);
    saving_per_request[p] = rho * per_chunk;
  }

  ReOutcome out;
  std::uint64_t counted = 0;
  std::uint64_t origin = 0;
  for (const RequestEvent& ev : trace) {
    if (ev.seq < warmup) continue;
    ++counted;
    ++origin;  // the origin always serves; decoders only reconstitute
    const double d = paths.distance(ev.client, ev.server);
    const double base = static_cast<double>(chunk_size) * d;
    double saving = 0.0;
    std::size_t p = profile.find(ev.client, ev.server);
    if (p != RedundancyProfile::npos) saving = saving_per_request[p];
    out.baseline_bytes_hops += base;
    out.reduced_bytes_hops += base - saving;
    out.baseline_bytes += chunk_size;
    out.transferred_bytes += chunk_size;  // external traffic unchanged
  }
  if (counted == 0) throw std::runtime_error("smartre: nothing to measure");
  out.reduction_fraction = 1.0 - out.reduced_bytes_hops / out.baseline_bytes_hops;
  out.bandwidth_savings = 0.0;
  out.origin_served_fraction =
      static_cast<double>(origin) / static_cast<double>(counted);
  return out;
}

ReOutcome simulate_endre(const std::vector<RequestEvent>& trace,
                         std::size_t pair_capacity_chunks,
                         const PathTable& paths, std::uint32_t chunk_size,
                         std::uint32_t shim_bytes, std::uint64_t warmup) {
  if (shim_bytes >= chunk_size)
    throw std::runtime_error("endre: shim must be smaller than a chunk");

  std::unordered_map<std::uint64_t, LruStore> pair_memory;
  ReOutcome out;
  std::uint64_t counted = 0;
  for (const RequestEvent& ev : trace) {
    auto [it, inserted] = pair_memory.try_emplace(
        pair_key(ev.client, ev.server), pair_capacity_chunks);
    LruStore& mem = it->second;
    const bool repeat = mem.touch(ev.chunk.rank);
    if (!repeat) mem.insert(ev.chunk.rank);
    if (ev.seq < warmup) continue;
    ++counted;
    const double bytes = repeat ? shim_bytes : chunk_size;
    const double d = paths.distance(ev.client, ev.server);
    out.baseline_bytes += chunk_size;
    out.transferred_bytes += bytes;
    out.baseline_bytes_hops += static_cast<double>(chunk_size) * d;
    out.reduced_bytes_hops += bytes * d;
  }
  if (counted == 0) throw std::runtime_error("endre: nothing to measure");
  out.bandwidth_savings = 1.0 - out.transferred_bytes / out.baseline_bytes;
  out.reduction_fraction = 1.0 - out.reduced_bytes_hops / out.baseline_bytes_hops;
  out.origin_served_fraction = 1.0;
  return out;
}

void write_profile_csv(std::ostream& out, const RedundancyProfile& profile) {
  out << "path_id,vol_bytes,red_bytes\n";
  for (std::size_t p = 0; p < profile.paths.size(); ++p)
    out << p << "," << profile.paths[p].vol_bytes << ","
        << profile.paths[p].red_bytes << "\n";
}

void write_manifest_csv(std::ostream& out, const CachingManifest& manifest) {
  char buf[64];
  out << "path_id,router,fraction\n";
  for (std::size_t p = 0; p < manifest.alloc.size(); ++p)
    for (const CachingManifest::Entry& e : manifest.alloc[p]) {
      std::snprintf(buf, sizeof buf, "%.9f", e.fraction);
      out << p << "," << e.router << "," << buf << "\n";
    }
}

}  // namespace redsim
