#include "redsim/topology.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace redsim {

const char* level_name(Level level) {
  return level == Level::Pop ? "pop" : "router";
}

std::optional<Level> parse_level(const std::string& text) {
  if (text == "pop") return Level::Pop;
  if (text == "router") return Level::Router;
  return std::nullopt;
}

std::vector<NodeId> Topology::pop_nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < node_count(); ++v)
    if (pop[v]) out.push_back(v);
  return out;
}

std::size_t Topology::pop_count() const {
  return static_cast<std::size_t>(std::count(pop.begin(), pop.end(), true));
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("topology: line " + std::to_string(line_no) + ": " +
                           what);
}

bool parse_u64(const std::string& tok, std::uint64_t& out) {
  auto* first = tok.data();
  auto* last = tok.data() + tok.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

// Raw parse result before id compaction.
struct RawGraph {
  std::string name;
  std::optional<Level> level;
  std::set<std::pair<std::uint64_t, std::uint64_t>> edges;  // u < v
  std::set<std::uint64_t> pop_marks;
};

void parse_header_comment(const std::string& line, RawGraph& g) {
  std::istringstream is(line.substr(1));
  std::string tok;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    std::string key = tok.substr(0, eq);
    std::string value = tok.substr(eq + 1);
    if (key == "level") {
      auto lvl = parse_level(value);
      if (lvl) g.level = *lvl;
    } else if (key == "name") {
      g.name = value;
    }
  }
}

Topology finish(RawGraph&& g, std::optional<Level> level_override,
                const std::string& default_name) {
  Level level;
  if (level_override)
    level = *level_override;
  else if (g.level)
    level = *g.level;
  else
    throw std::runtime_error(
        "topology: no level given (neither header tag nor caller)");

  if (g.edges.empty()) throw std::runtime_error("topology: no edges");

  // Dense ids by ascending original id.
  std::map<std::uint64_t, NodeId> dense;
  for (const auto& [u, v] : g.edges) {
    dense.emplace(u, 0);
    dense.emplace(v, 0);
  }
  NodeId next = 0;
  for (auto& [orig, id] : dense) id = next++;

  Topology t;
  t.name = g.name.empty() ? default_name : g.name;
  t.level = level;
  t.adj.resize(dense.size());
  t.original_id.resize(dense.size());
  for (const auto& [orig, id] : dense) t.original_id[id] = orig;

  t.edges.reserve(g.edges.size());
  for (const auto& [u, v] : g.edges) {
    NodeId a = dense.at(u);
    NodeId b = dense.at(v);
    if (a > b) std::swap(a, b);
    t.edges.emplace_back(a, b);
    t.adj[a].push_back(b);
    t.adj[b].push_back(a);
  }
  std::sort(t.edges.begin(), t.edges.end());
  for (auto& nbrs : t.adj) std::sort(nbrs.begin(), nbrs.end());

  // POP marks: every node in a pop-level topology, tagged subset otherwise.
  // A router-level file without tags falls back to all nodes.
  t.pop.assign(t.node_count(), false);
  if (level == Level::Pop || g.pop_marks.empty()) {
    t.pop.assign(t.node_count(), true);
  } else {
    for (std::uint64_t orig : g.pop_marks) {
      auto it = dense.find(orig);
      if (it == dense.end())
        throw std::runtime_error("topology: pop mark " + std::to_string(orig) +
                                 " names an unknown node");
      t.pop[it->second] = true;
    }
  }

  // Connectivity check, BFS from dense node 0.
  std::vector<bool> seen(t.node_count(), false);
  std::deque<NodeId> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : t.adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        queue.push_back(w);
      }
  }
  if (reached != t.node_count()) {
    for (NodeId v = 0; v < t.node_count(); ++v)
      if (!seen[v])
        throw std::runtime_error(
            "topology: graph is disconnected; smallest unreachable node is " +
            std::to_string(t.original_id[v]));
  }
  return t;
}

}  // namespace

Topology load_topology(std::istream& in, std::optional<Level> level_override,
                       const std::string& default_name) {
  RawGraph g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#') {
      parse_header_comment(line.substr(start), g);
      continue;
    }
    std::istringstream is(line);
    std::string a, b, extra;
    if (!(is >> a)) continue;
    if (a == "pop") {
      std::uint64_t id;
      if (!(is >> b) || !parse_u64(b, id))
        parse_fail(line_no, "expected 'pop <id>'");
      g.pop_marks.insert(id);
      continue;
    }
    std::uint64_t u, v;
    if (!(is >> b) || !parse_u64(a, u) || !parse_u64(b, v))
      parse_fail(line_no, "expected two integer node ids, got '" + line + "'");
    if (is >> extra) parse_fail(line_no, "trailing tokens after edge");
    if (u == v) parse_fail(line_no, "self loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
    g.edges.emplace(u, v);
  }
  return finish(std::move(g), level_override, default_name);
}

Topology load_topology_file(const std::string& path,
                            std::optional<Level> level_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("topology: cannot open " + path);
  std::string base = path;
  auto slash = base.find_last_of('/');
  if (slash != std::string::npos) base = base.substr(slash + 1);
  auto dot = base.find_last_of('.');
  if (dot != std::string::npos) base = base.substr(0, dot);
  return load_topology(in, level_override, base);
}

void write_topology(std::ostream& out, const Topology& t) {
  out << "# level=" << level_name(t.level) << " name=" << t.name << "\n";
  if (t.level == Level::Router && t.pop_count() != t.node_count())
    for (NodeId v = 0; v < t.node_count(); ++v)
      if (t.pop[v]) out << "pop " << t.original_id[v] << "\n";
  for (const auto& [a, b] : t.edges)
    out << t.original_id[a] << " " << t.original_id[b] << "\n";
}

Topology import_cch(std::istream& in, Level level, const std::string& name) {
  RawGraph g;
  g.name = name;
  g.level = level;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream is(line);
    std::string tok;
    if (!(is >> tok)) continue;
    std::uint64_t uid;
    if (!parse_u64(tok, uid)) continue;  // external/decoration line
    while (is >> tok) {
      // Neighbor tokens look like <123>; everything else is metadata.
      if (tok.size() >= 3 && tok.front() == '<' && tok.back() == '>') {
        std::uint64_t nbr;
        if (parse_u64(tok.substr(1, tok.size() - 2), nbr) && nbr != uid) {
          auto u = uid, v = nbr;
          if (u > v) std::swap(u, v);
          g.edges.emplace(u, v);
        }
      }
    }
  }
  return finish(std::move(g), level, name);
}

Placement select_servers(const Topology& t, std::size_t k) {
  std::vector<NodeId> pops = t.pop_nodes();
  if (k == 0) throw std::runtime_error("placement: need at least one server");
  if (k >= pops.size())
    throw std::runtime_error("placement: k=" + std::to_string(k) +
                             " must be below the POP count (" +
                             std::to_string(pops.size()) + ")");
  // Highest degree first, ties to the lower node id.
  std::vector<NodeId> order = pops;
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (t.degree(a) != t.degree(b)) return t.degree(a) > t.degree(b);
    return a < b;
  });
  Placement p;
  p.servers.assign(order.begin(), order.begin() + k);
  p.clients.assign(order.begin() + k, order.end());
  std::sort(p.servers.begin(), p.servers.end());
  std::sort(p.clients.begin(), p.clients.end());
  return p;
}

PathTable::PathTable(const Topology& t) : topo_(t), trees_(t.node_count()) {}

const PathTable::SourceTree& PathTable::tree_for(NodeId source) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = trees_[source];
  if (slot) return *slot;

  // BFS with ascending neighbor expansion: the parent chain of every node
  // is the lexicographically smallest among its shortest paths.
  auto tree = std::make_unique<SourceTree>();
  const std::size_t n = topo_.node_count();
  constexpr std::uint32_t kUnset = 0xffffffffu;
  tree->parent.assign(n, kUnset);
  tree->dist.assign(n, kUnset);
  std::deque<NodeId> queue{source};
  tree->parent[source] = source;
  tree->dist[source] = 0;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : topo_.adj[v]) {
      if (tree->parent[w] == kUnset) {
        tree->parent[w] = v;
        tree->dist[w] = tree->dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  slot = std::move(tree);
  return *slot;
}

std::vector<NodeId> PathTable::shortest_path(NodeId a, NodeId b) const {
  const SourceTree& tree = tree_for(a);
  std::vector<NodeId> path;
  path.reserve(tree.dist[b] + 1);
  for (NodeId v = b; v != a; v = tree.parent[v]) path.push_back(v);
  path.push_back(a);
  std::reverse(path.begin(), path.end());
  return path;
}

std::uint32_t PathTable::distance(NodeId a, NodeId b) const {
  return tree_for(a).dist[b];
}

}  // namespace redsim
