#ifndef NCG_GRAPH_HPP
#define NCG_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ncg {

using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;

/// An undirected bond {first, second}; canonical form has first < second.
using Bond = std::pair<NodeIndex, NodeIndex>;

struct NodePair {
  NodeIndex a = 0;
  NodeIndex b = 0;
};

/// Directed edge d_ik: tail i, head k.
struct DirectedEdge {
  NodeIndex tail = 0;
  NodeIndex head = 0;

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

/**
 * Finite simple undirected graph with a fixed node labelling 0..n-1.
 *
 * Every bond {i,k} contributes the two directed edges (i,k) and (k,i).
 * Directed edges are indexed node by node in ascending tail order and,
 * within a tail, in ascending head order, so edge indices coincide with
 * positions in the CSR neighbor array.
 *
 * Graphs are immutable once built. Construction rejects self-loops and
 * repeated bonds and, unless `Connectivity::allowed` is passed, graphs with
 * more than one component.
 */
class Graph {
 public:
  enum class Connectivity { required, allowed };

  Graph() = default;

  static Graph from_bonds(std::size_t node_count, std::span<const Bond> bonds,
                          Connectivity connectivity = Connectivity::required);

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  /// m = sum of degrees = number of directed edges.
  std::size_t directed_edge_count() const noexcept { return heads_.size(); }
  std::size_t bond_count() const noexcept { return heads_.size() / 2; }

  std::span<const NodeIndex> neighbors(NodeIndex i) const;
  std::size_t degree(NodeIndex i) const;
  std::size_t max_degree() const noexcept;
  std::vector<std::size_t> degrees() const;

  DirectedEdge edge(EdgeIndex e) const;
  std::optional<EdgeIndex> edge_index(NodeIndex tail, NodeIndex head) const;
  /// Index of (k,i) given the index of (i,k).
  EdgeIndex reverse(EdgeIndex e) const { return reverse_.at(e); }
  /// Range [first, last) of the edges leaving node i.
  std::pair<EdgeIndex, EdgeIndex> out_edges(NodeIndex i) const;

  bool adjacent(NodeIndex i, NodeIndex k) const { return edge_index(i, k).has_value(); }

  std::size_t component_count() const noexcept { return component_count_; }
  bool connected() const noexcept { return component_count_ <= 1; }
  /// Component label per node, labels numbered by first occurrence.
  const std::vector<std::size_t>& component_labels() const noexcept { return components_; }

  /// Bonds in canonical form, sorted lexicographically.
  std::vector<Bond> bonds() const;

  friend bool operator==(const Graph& lhs, const Graph& rhs) {
    return lhs.offsets_ == rhs.offsets_ && lhs.heads_ == rhs.heads_;
  }

 private:
  std::vector<std::size_t> offsets_;  // size n+1
  std::vector<NodeIndex> heads_;      // size m, sorted per tail
  std::vector<NodeIndex> tails_;      // size m
  std::vector<EdgeIndex> reverse_;    // size m
  std::vector<std::size_t> components_;
  std::size_t component_count_ = 0;
};

/// Verifies the structural invariants of `g`; returns a description of the
/// first violation found, or nullopt.
std::optional<std::string> check_invariants(const Graph& g);

// Builders.
Graph build_path(std::size_t n);
Graph build_cycle(std::size_t n);
/// Full binary tree of the given depth in breadth-first labelling: the
/// children of node i are 2i+1 and 2i+2.
Graph build_binary_tree(std::size_t depth);
Graph build_complete(std::size_t n);
Graph build_star(std::size_t leaves);

/// G(n, p) draw conditioned on connectedness. Attempt r draws from a
/// generator seeded with (seed, r); after `max_attempts` disconnected draws
/// GenerationFailed is thrown.
Graph build_random(std::size_t n, double p, std::uint64_t seed,
                   std::size_t max_attempts = 1000);

// Combinatorial structure.

/// Breadth-first distances from `source`; unreachable nodes hold nullopt.
std::vector<std::optional<std::size_t>> bfs_distances(const Graph& g, NodeIndex source);
std::size_t combinatorial_distance(const Graph& g, NodePair pair);
/// One shortest node sequence from pair.a to pair.b (lowest-index
/// predecessor wins ties).
std::vector<NodeIndex> shortest_path(const Graph& g, NodePair pair);

struct InducedSubgraph {
  Graph graph;
  /// original_index[j] is the node of the parent graph labelled j here.
  std::vector<NodeIndex> original_index;

  std::optional<NodeIndex> local_index(NodeIndex original) const;
};

/// Subgraph on `nodes` with every bond of g between them. Local labels follow
/// ascending original index. The result may be disconnected.
InducedSubgraph induced_subgraph(const Graph& g, std::span<const NodeIndex> nodes);

/// True iff g is connected and has n-1 bonds.
bool is_tree(const Graph& g);

/// A cycle basis: one closed node walk (first node not repeated) per
/// non-tree bond of a breadth-first spanning forest.
std::vector<std::vector<NodeIndex>> fundamental_cycles(const Graph& g);

}  // namespace ncg

#endif  // NCG_GRAPH_HPP
