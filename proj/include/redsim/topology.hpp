#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace redsim {

using NodeId = std::uint32_t;

enum class Level { Pop, Router };

const char* level_name(Level level);
std::optional<Level> parse_level(const std::string& text);

// Undirected hop-metric graph. Node ids are dense [0, node_count) assigned
// by ascending original id, so a topology is invariant under permutations
// of the input edge list. Immutable once loaded.
struct Topology {
  std::string name;
  Level level = Level::Pop;
  std::vector<std::vector<NodeId>> adj;        // sorted ascending
  std::vector<std::pair<NodeId, NodeId>> edges;  // canonical u < v, sorted
  std::vector<bool> pop;                       // POP marker per node
  std::vector<std::uint64_t> original_id;      // dense id -> input id

  std::size_t node_count() const { return adj.size(); }
  std::size_t edge_count() const { return edges.size(); }
  std::size_t degree(NodeId v) const { return adj[v].size(); }
  std::vector<NodeId> pop_nodes() const;
  std::size_t pop_count() const;
};

struct Placement {
  std::vector<NodeId> servers;  // sorted ascending
  std::vector<NodeId> clients;  // sorted ascending
};

// Parses the edge-list format:
//   # level=pop|router name=<label>
//   # free comments
//   pop <id>           (marks a POP in router-level files)
//   <u> <v>
// Validates connectivity, rejects self loops, collapses duplicate edges.
// `level_override` wins over the header tag; one of the two must be present.
Topology load_topology(std::istream& in,
                       std::optional<Level> level_override = std::nullopt,
                       const std::string& default_name = "");
Topology load_topology_file(const std::string& path,
                            std::optional<Level> level_override = std::nullopt);

void write_topology(std::ostream& out, const Topology& t);

// Converts Rocketfuel-style adjacency ("<uid> ... -> <n1> <n2> ...") into
// the edge-list format above. Tolerant of decorations; lines whose first
// token is not a non-negative integer are skipped.
Topology import_cch(std::istream& in, Level level, const std::string& name);

// Servers = k highest-degree POP nodes (ties to the lower id), clients =
// every remaining POP node. Requires k < pop_count.
Placement select_servers(const Topology& t, std::size_t k);

// Memoized single-source BFS trees with deterministic tie-breaking: among
// equal-hop paths the lexicographically smallest node sequence wins.
// Lookups are safe from multiple threads.
class PathTable {
 public:
  explicit PathTable(const Topology& t);

  // Inclusive of both endpoints; front() == a, back() == b.
  std::vector<NodeId> shortest_path(NodeId a, NodeId b) const;
  std::uint32_t distance(NodeId a, NodeId b) const;

  const Topology& topology() const { return topo_; }

 private:
  struct SourceTree {
    std::vector<NodeId> parent;
    std::vector<std::uint32_t> dist;
  };
  const SourceTree& tree_for(NodeId source) const;

  const Topology& topo_;
  mutable std::mutex mu_;
  mutable std::vector<std::unique_ptr<SourceTree>> trees_;
};

}  // namespace redsim
