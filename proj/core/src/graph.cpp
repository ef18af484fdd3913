#include "ncg/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <random>

#include "ncg/error.hpp"

namespace ncg {

namespace {

void require_node(const Graph& g, NodeIndex i) {
  if (i >= g.node_count()) {
    throw InvalidArgument("node index " + std::to_string(i) + " out of range (n = " +
                          std::to_string(g.node_count()) + ")");
  }
}

}  // namespace

Graph Graph::from_bonds(std::size_t node_count, std::span<const Bond> bonds,
                        Connectivity connectivity) {
  if (node_count == 0) throw InvalidSize("graph must have at least one node");

  std::vector<std::vector<NodeIndex>> adjacency(node_count);
  for (const auto& [i, k] : bonds) {
    if (i >= node_count || k >= node_count) {
      throw InvalidGraph("bond {" + std::to_string(i) + "," + std::to_string(k) +
                         "} references a node outside 0.." + std::to_string(node_count - 1));
    }
    if (i == k) throw InvalidGraph("self-loop at node " + std::to_string(i));
    adjacency[i].push_back(k);
    adjacency[k].push_back(i);
  }

  Graph g;
  g.offsets_.assign(node_count + 1, 0);
  for (NodeIndex i = 0; i < node_count; ++i) {
    auto& row = adjacency[i];
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw InvalidGraph("duplicate bond at node " + std::to_string(i));
    }
    g.offsets_[i + 1] = g.offsets_[i] + row.size();
  }
  g.heads_.reserve(g.offsets_.back());
  g.tails_.reserve(g.offsets_.back());
  for (NodeIndex i = 0; i < node_count; ++i) {
    for (NodeIndex k : adjacency[i]) {
      g.tails_.push_back(i);
      g.heads_.push_back(k);
    }
  }

  g.reverse_.resize(g.heads_.size());
  for (EdgeIndex e = 0; e < g.heads_.size(); ++e) {
    g.reverse_[e] = *g.edge_index(g.heads_[e], g.tails_[e]);
  }

  g.components_.assign(node_count, std::numeric_limits<std::size_t>::max());
  for (NodeIndex root = 0; root < node_count; ++root) {
    if (g.components_[root] != std::numeric_limits<std::size_t>::max()) continue;
    const std::size_t label = g.component_count_++;
    std::queue<NodeIndex> queue;
    queue.push(root);
    g.components_[root] = label;
    while (!queue.empty()) {
      const NodeIndex i = queue.front();
      queue.pop();
      for (NodeIndex k : g.neighbors(i)) {
        if (g.components_[k] == std::numeric_limits<std::size_t>::max()) {
          g.components_[k] = label;
          queue.push(k);
        }
      }
    }
  }

  if (connectivity == Connectivity::required && g.component_count_ > 1) {
    throw InvalidGraph("graph is disconnected (" + std::to_string(g.component_count_) +
                       " components)");
  }
  return g;
}

std::span<const NodeIndex> Graph::neighbors(NodeIndex i) const {
  require_node(*this, i);
  return {heads_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::size_t Graph::degree(NodeIndex i) const {
  require_node(*this, i);
  return offsets_[i + 1] - offsets_[i];
}

std::size_t Graph::max_degree() const noexcept {
  std::size_t best = 0;
  for (std::size_t i = 0; i + 1 < offsets_.size(); ++i) {
    best = std::max(best, offsets_[i + 1] - offsets_[i]);
  }
  return best;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> out(node_count());
  for (NodeIndex i = 0; i < out.size(); ++i) out[i] = offsets_[i + 1] - offsets_[i];
  return out;
}

DirectedEdge Graph::edge(EdgeIndex e) const {
  if (e >= heads_.size()) throw InvalidArgument("edge index out of range");
  return {tails_[e], heads_[e]};
}

std::optional<EdgeIndex> Graph::edge_index(NodeIndex tail, NodeIndex head) const {
  if (tail >= node_count()) return std::nullopt;
  const auto first = heads_.begin() + static_cast<std::ptrdiff_t>(offsets_[tail]);
  const auto last = heads_.begin() + static_cast<std::ptrdiff_t>(offsets_[tail + 1]);
  const auto it = std::lower_bound(first, last, head);
  if (it == last || *it != head) return std::nullopt;
  return static_cast<EdgeIndex>(it - heads_.begin());
}

std::pair<EdgeIndex, EdgeIndex> Graph::out_edges(NodeIndex i) const {
  require_node(*this, i);
  return {offsets_[i], offsets_[i + 1]};
}

std::vector<Bond> Graph::bonds() const {
  std::vector<Bond> out;
  out.reserve(bond_count());
  for (EdgeIndex e = 0; e < heads_.size(); ++e) {
    if (tails_[e] < heads_[e]) out.emplace_back(tails_[e], heads_[e]);
  }
  return out;
}

std::optional<std::string> check_invariants(const Graph& g) {
  const std::size_t n = g.node_count();
  std::size_t degree_sum = 0;
  for (NodeIndex i = 0; i < n; ++i) {
    const auto nbrs = g.neighbors(i);
    degree_sum += nbrs.size();
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      const NodeIndex k = nbrs[j];
      if (k >= n) return "neighbor out of range at node " + std::to_string(i);
      if (k == i) return "self-loop at node " + std::to_string(i);
      if (j > 0 && nbrs[j - 1] >= k) return "unsorted or repeated neighbor at node " + std::to_string(i);
      if (!g.adjacent(k, i)) return "asymmetric adjacency " + std::to_string(i) + "~" + std::to_string(k);
    }
  }
  if (degree_sum != g.directed_edge_count()) return "sum of degrees differs from m";
  if (degree_sum % 2 != 0) return "odd number of directed edges";
  for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e) {
    const auto [i, k] = g.edge(e);
    const auto [k2, i2] = g.edge(g.reverse(e));
    if (i != i2 || k != k2) return "reverse edge map broken at " + std::to_string(e);
  }
  const auto dist = bfs_distances(g, 0);
  const bool reach_all = std::all_of(dist.begin(), dist.end(), [](auto d) { return d.has_value(); });
  if (reach_all != g.connected()) return "component count disagrees with traversal";
  return std::nullopt;
}

Graph build_path(std::size_t n) {
  if (n < 2) throw InvalidSize("path needs n >= 2, got " + std::to_string(n));
  std::vector<Bond> bonds;
  for (NodeIndex i = 0; i + 1 < n; ++i) bonds.emplace_back(i, i + 1);
  return Graph::from_bonds(n, bonds);
}

Graph build_cycle(std::size_t n) {
  if (n < 3) throw InvalidSize("cycle needs n >= 3, got " + std::to_string(n));
  std::vector<Bond> bonds;
  for (NodeIndex i = 0; i + 1 < n; ++i) bonds.emplace_back(i, i + 1);
  bonds.emplace_back(0, n - 1);
  return Graph::from_bonds(n, bonds);
}

Graph build_binary_tree(std::size_t depth) {
  if (depth >= 40) throw InvalidSize("binary tree depth " + std::to_string(depth) + " too large");
  const std::size_t n = (std::size_t{2} << depth) - 1;
  std::vector<Bond> bonds;
  bonds.reserve(n - 1);
  for (NodeIndex child = 1; child < n; ++child) bonds.emplace_back((child - 1) / 2, child);
  return Graph::from_bonds(n, bonds);
}

Graph build_complete(std::size_t n) {
  if (n < 1) throw InvalidSize("complete graph needs n >= 1");
  std::vector<Bond> bonds;
  for (NodeIndex i = 0; i < n; ++i)
    for (NodeIndex k = i + 1; k < n; ++k) bonds.emplace_back(i, k);
  return Graph::from_bonds(n, bonds);
}

Graph build_star(std::size_t leaves) {
  if (leaves < 1) throw InvalidSize("star needs at least one leaf");
  std::vector<Bond> bonds;
  for (NodeIndex k = 1; k <= leaves; ++k) bonds.emplace_back(0, k);
  return Graph::from_bonds(leaves + 1, bonds);
}

Graph build_random(std::size_t n, double p, std::uint64_t seed, std::size_t max_attempts) {
  if (n < 1) throw InvalidSize("random graph needs n >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("edge probability must lie in (0, 1]");

  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(attempt), static_cast<std::uint32_t>(attempt >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<Bond> bonds;
    for (NodeIndex i = 0; i < n; ++i) {
      for (NodeIndex k = i + 1; k < n; ++k) {
        // 53-bit uniform in [0,1); independent of the standard library's
        // distribution implementation.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p) bonds.emplace_back(i, k);
      }
    }
    auto g = Graph::from_bonds(n, bonds, Graph::Connectivity::allowed);
    if (g.connected()) return g;
  }
  throw GenerationFailed("no connected draw for n = " + std::to_string(n) + ", p = " +
                         std::to_string(p) + " after " + std::to_string(max_attempts) +
                         " attempts");
}

std::vector<std::optional<std::size_t>> bfs_distances(const Graph& g, NodeIndex source) {
  require_node(g, source);
  std::vector<std::optional<std::size_t>> dist(g.node_count());
  std::queue<NodeIndex> queue;
  dist[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const NodeIndex i = queue.front();
    queue.pop();
    for (NodeIndex k : g.neighbors(i)) {
      if (!dist[k]) {
        dist[k] = *dist[i] + 1;
        queue.push(k);
      }
    }
  }
  return dist;
}

std::size_t combinatorial_distance(const Graph& g, NodePair pair) {
  require_node(g, pair.a);
  require_node(g, pair.b);
  const auto dist = bfs_distances(g, pair.a);
  if (!dist[pair.b]) {
    throw NoPath("no path between " + std::to_string(pair.a) + " and " + std::to_string(pair.b));
  }
  return *dist[pair.b];
}

std::vector<NodeIndex> shortest_path(const Graph& g, NodePair pair) {
  require_node(g, pair.a);
  require_node(g, pair.b);
  // Walk back from b along strictly decreasing distance to a.
  const auto dist = bfs_distances(g, pair.a);
  if (!dist[pair.b]) {
    throw NoPath("no path between " + std::to_string(pair.a) + " and " + std::to_string(pair.b));
  }
  std::vector<NodeIndex> path{pair.b};
  NodeIndex cur = pair.b;
  while (cur != pair.a) {
    for (NodeIndex k : g.neighbors(cur)) {
      if (dist[k] && *dist[k] + 1 == *dist[cur]) {
        cur = k;
        break;
      }
    }
    path.push_back(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<NodeIndex> InducedSubgraph::local_index(NodeIndex original) const {
  const auto it = std::lower_bound(original_index.begin(), original_index.end(), original);
  if (it == original_index.end() || *it != original) return std::nullopt;
  return static_cast<NodeIndex>(it - original_index.begin());
}

InducedSubgraph induced_subgraph(const Graph& g, std::span<const NodeIndex> nodes) {
  if (nodes.empty()) throw InvalidArgument("induced subgraph needs a nonempty node set");
  InducedSubgraph sub;
  sub.original_index.assign(nodes.begin(), nodes.end());
  std::sort(sub.original_index.begin(), sub.original_index.end());
  sub.original_index.erase(std::unique(sub.original_index.begin(), sub.original_index.end()),
                           sub.original_index.end());
  for (NodeIndex i : sub.original_index) require_node(g, i);

  std::vector<Bond> bonds;
  for (NodeIndex local = 0; local < sub.original_index.size(); ++local) {
    for (NodeIndex k : g.neighbors(sub.original_index[local])) {
      const auto other = sub.local_index(k);
      if (other && local < *other) bonds.emplace_back(local, *other);
    }
  }
  sub.graph = Graph::from_bonds(sub.original_index.size(), bonds, Graph::Connectivity::allowed);
  return sub;
}

bool is_tree(const Graph& g) {
  return g.connected() && g.bond_count() + 1 == g.node_count();
}

std::vector<std::vector<NodeIndex>> fundamental_cycles(const Graph& g) {
  const std::size_t n = g.node_count();
  constexpr auto none = std::numeric_limits<NodeIndex>::max();
  std::vector<NodeIndex> parent(n, none);
  std::vector<std::size_t> depth(n, 0);
  std::vector<bool> seen(n, false);
  std::vector<bool> tree_edge(g.directed_edge_count(), false);

  for (NodeIndex root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    std::queue<NodeIndex> queue;
    queue.push(root);
    while (!queue.empty()) {
      const NodeIndex i = queue.front();
      queue.pop();
      for (NodeIndex k : g.neighbors(i)) {
        if (seen[k]) continue;
        seen[k] = true;
        parent[k] = i;
        depth[k] = depth[i] + 1;
        tree_edge[*g.edge_index(i, k)] = true;
        tree_edge[*g.edge_index(k, i)] = true;
        queue.push(k);
      }
    }
  }

  std::vector<std::vector<NodeIndex>> cycles;
  for (const auto& [i, k] : g.bonds()) {
    if (tree_edge[*g.edge_index(i, k)]) continue;
    // Climb both endpoints to their lowest common ancestor.
    std::vector<NodeIndex> up{i};
    std::vector<NodeIndex> down{k};
    NodeIndex x = i;
    NodeIndex y = k;
    while (x != y) {
      if (depth[x] >= depth[y]) {
        x = parent[x];
        up.push_back(x);
      } else {
        y = parent[y];
        down.push_back(y);
      }
    }
    down.pop_back();  // common ancestor already in `up`
    // i -> ... -> lca -> ... -> k, closing with the bond k -> i.
    std::vector<NodeIndex> cycle(up.begin(), up.end());
    cycle.insert(cycle.end(), down.rbegin(), down.rend());
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

}  // namespace ncg
