// Generates the bundled desk-scale topology assets: synthetic ISP-like
// graphs (backbone ring of hubs, leaf POPs behind them, chord shortcuts)
// sized after the public Rocketfuel snapshots, plus tiny path/star graphs
// for deterministic tests. Output is reproducible for a fixed seed.

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "redsim/rng.hpp"
#include "redsim/topology.hpp"

using namespace redsim;

namespace {

struct PopSpec {
  const char* name;
  std::size_t pops;
  std::size_t hubs;
  std::size_t chords;
  double spoke_prob;  // access POP uplink into its sector hub
  std::size_t routers;  // router-level expansion target
  std::size_t links;
};

// Router/link totals follow the published snapshot sizes. The POP level is
// two concentric rings: a backbone ring of hubs and an access ring threaded
// through the remaining POPs, joined by sector spokes. Access POPs carry
// transit for their ring neighbors, which is what the real maps do; client
// paths run 4-7 hops and the first-hop cache is contested.
const PopSpec kSpecs[] = {
    {"exodus", 23, 10, 1, 0.65, 338, 800},
    {"sprint", 43, 14, 1, 0.35, 547, 1600},
    {"att", 108, 22, 2, 0.07, 733, 2300},
    {"ntt", 121, 22, 2, 0.07, 1018, 2300},
};

using EdgeSet = std::set<std::pair<std::uint64_t, std::uint64_t>>;

void add_edge(EdgeSet& edges, std::uint64_t u, std::uint64_t v) {
  if (u == v) return;
  if (u > v) std::swap(u, v);
  edges.emplace(u, v);
}

EdgeSet pop_graph(const PopSpec& spec, SplitMix64 rng) {
  EdgeSet edges;
  for (std::size_t i = 0; i < spec.hubs; ++i)
    add_edge(edges, i, (i + 1) % spec.hubs);
  std::size_t added = 0;
  while (added < spec.chords) {
    std::uint64_t a = rng.next_below(spec.hubs);
    std::uint64_t b = rng.next_below(spec.hubs);
    // Skip trivial chords between ring neighbors.
    if (a == b || (a + 1) % spec.hubs == b || (b + 1) % spec.hubs == a)
      continue;
    if (edges.emplace(std::min(a, b), std::max(a, b)).second) ++added;
  }
  // Access ring threaded through the remaining POPs, with sector spokes
  // into the backbone. Every access POP transits its ring neighbors.
  const std::size_t access = spec.pops - spec.hubs;
  for (std::size_t i = 0; i + 1 < access; ++i)
    add_edge(edges, spec.hubs + i, spec.hubs + i + 1);
  if (access > 2) add_edge(edges, spec.hubs, spec.hubs + access - 1);
  for (std::size_t i = 0; i < access; ++i) {
    std::size_t sector = i * spec.hubs / access;
    if (i == 0 || rng.next_double() < spec.spoke_prob)
      add_edge(edges, spec.hubs + i, sector);
  }
  return edges;
}

struct RouterGraph {
  EdgeSet edges;
  std::vector<std::uint64_t> gateways;  // the POP-marked routers
};

RouterGraph router_graph(const PopSpec& spec, const EdgeSet& pop_edges,
                         SplitMix64 rng) {
  // Cluster sizes proportional to POP degree, gateway router first.
  std::vector<std::size_t> degree(spec.pops, 0);
  for (const auto& [u, v] : pop_edges) {
    ++degree[u];
    ++degree[v];
  }
  const std::size_t total_deg =
      std::accumulate(degree.begin(), degree.end(), std::size_t{0});
  std::vector<std::size_t> size(spec.pops, 1);
  std::size_t assigned = spec.pops;
  for (std::size_t i = 0; i < spec.pops; ++i) {
    std::size_t extra = (spec.routers - spec.pops) * degree[i] / total_deg;
    size[i] += extra;
    assigned += extra;
  }
  std::vector<std::size_t> order(spec.pops);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (degree[a] != degree[b]) return degree[a] > degree[b];
    return a < b;
  });
  for (std::size_t i = 0; assigned < spec.routers; ++i, ++assigned)
    ++size[order[i % spec.pops]];

  RouterGraph rg;
  std::vector<std::vector<std::uint64_t>> members(spec.pops);
  std::uint64_t next_id = 0;
  for (std::size_t i = 0; i < spec.pops; ++i) {
    for (std::size_t j = 0; j < size[i]; ++j) members[i].push_back(next_id++);
    rg.gateways.push_back(members[i][0]);
  }

  // Members star onto the gateway; POP edges become gateway links.
  for (std::size_t i = 0; i < spec.pops; ++i)
    for (std::size_t j = 1; j < members[i].size(); ++j)
      add_edge(rg.edges, members[i][0], members[i][j]);
  std::vector<std::pair<std::size_t, std::size_t>> pop_pairs(pop_edges.begin(),
                                                             pop_edges.end());
  for (const auto& [u, v] : pop_pairs)
    add_edge(rg.edges, rg.gateways[u], rg.gateways[v]);

  if (rg.edges.size() > spec.links)
    throw std::runtime_error(std::string(spec.name) +
                             ": base router graph already exceeds link target");

  // Fill to the exact link count with intra-cluster links and links that
  // parallel POP adjacencies.
  while (rg.edges.size() < spec.links) {
    if (rng.next_double() < 0.5) {
      std::size_t c = rng.next_below(spec.pops);
      if (members[c].size() < 3) continue;
      std::uint64_t a = members[c][rng.next_below(members[c].size())];
      std::uint64_t b = members[c][rng.next_below(members[c].size())];
      add_edge(rg.edges, a, b);
    } else {
      const auto& [u, v] = pop_pairs[rng.next_below(pop_pairs.size())];
      std::uint64_t a = members[u][rng.next_below(members[u].size())];
      std::uint64_t b = members[v][rng.next_below(members[v].size())];
      add_edge(rg.edges, a, b);
    }
  }
  return rg;
}

void write_edge_file(const std::filesystem::path& path, const std::string& name,
                     Level level, const EdgeSet& edges,
                     const std::vector<std::uint64_t>& pop_marks) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# level=" << level_name(level) << " name=" << name << "\n";
  for (std::uint64_t g : pop_marks) out << "pop " << g << "\n";
  for (const auto& [u, v] : edges) out << u << " " << v << "\n";
}

double mean_pop_distance(const Topology& t, std::size_t servers) {
  Placement p = select_servers(t, servers);
  PathTable paths(t);
  double sum = 0.0;
  std::size_t count = 0;
  for (NodeId c : p.clients)
    for (NodeId s : p.servers) {
      sum += paths.distance(c, s);
      ++count;
    }
  return sum / static_cast<double>(count);
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path out_dir = argc > 1 ? argv[1] : "data/topologies";
  std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 42;
  std::filesystem::create_directories(out_dir);

  try {
    for (const PopSpec& spec : kSpecs) {
      SplitMix64 rng(seed);
      SplitMix64 pop_rng = rng.split(1);
      SplitMix64 router_rng = rng.split(2);

      EdgeSet pop_edges = pop_graph(spec, pop_rng);
      std::string pop_name = std::string(spec.name) + "_pop";
      write_edge_file(out_dir / (pop_name + ".txt"), pop_name, Level::Pop,
                      pop_edges, {});

      RouterGraph rg = router_graph(spec, pop_edges, router_rng);
      std::string router_name = std::string(spec.name) + "_router";
      write_edge_file(out_dir / (router_name + ".txt"), router_name,
                      Level::Router, rg.edges, rg.gateways);

      Topology pop_topo =
          load_topology_file((out_dir / (pop_name + ".txt")).string());
      Topology router_topo =
          load_topology_file((out_dir / (router_name + ".txt")).string());
      std::size_t k = spec.pops < 40 ? 10 : 20;
      std::cout << spec.name << ": pop " << pop_topo.node_count() << "n/"
                << pop_topo.edge_count() << "e meanpath "
                << mean_pop_distance(pop_topo, k) << " | router "
                << router_topo.node_count() << "n/" << router_topo.edge_count()
                << "e pops " << router_topo.pop_count() << " meanpath "
                << mean_pop_distance(router_topo, k) << "\n";
    }

    EdgeSet path_edges;
    for (std::uint64_t v = 0; v + 1 < 6; ++v) add_edge(path_edges, v, v + 1);
    write_edge_file(out_dir / "path6.txt", "path6", Level::Pop, path_edges, {});

    EdgeSet star_edges;
    for (std::uint64_t v = 1; v <= 8; ++v) add_edge(star_edges, 0, v);
    write_edge_file(out_dir / "star9.txt", "star9", Level::Pop, star_edges, {});
  } catch (const std::exception& e) {
    std::cerr << "topogen: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
