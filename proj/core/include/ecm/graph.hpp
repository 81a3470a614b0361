#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "ecm/random.hpp"

namespace ecm {

using NodeId = std::uint32_t;

struct Edge {
  NodeId source = 0;
  NodeId target = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple directed graph. An edge u -> v means "u follows v": v is a friend of
/// u and u is a follower of v. Both adjacency directions are kept in sync, and
/// a hashed edge set gives O(1) expected membership tests.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  explicit DirectedGraph(std::size_t node_count);

  std::size_t node_count() const noexcept { return friends_.size(); }
  std::size_t edge_count() const noexcept { return edge_set_.size(); }

  /// E / (N (N - 1)); zero for graphs with fewer than two nodes.
  double density() const noexcept;

  bool has_edge(NodeId u, NodeId v) const;

  /// Inserts u -> v. Returns false if the edge already exists. Throws
  /// ParameterError on self-loops or out-of-range endpoints.
  bool add_edge(NodeId u, NodeId v);

  /// Removes u -> v. Throws RewireError if the edge is absent.
  void remove_edge(NodeId u, NodeId v);

  /// Replaces u -> old_target with u -> new_target, keeping E and the
  /// out-degree of u unchanged.
  void rewire_edge(NodeId u, NodeId old_target, NodeId new_target);

  std::span<const NodeId> friends(NodeId u) const { return friends_[u]; }
  std::span<const NodeId> followers(NodeId v) const { return followers_[v]; }
  std::size_t out_degree(NodeId u) const { return friends_[u].size(); }
  std::size_t in_degree(NodeId v) const { return followers_[v].size(); }

  /// All edges in lexicographic (source, target) order.
  std::vector<Edge> edges() const;

  /// Equality of node count and edge set; adjacency order is ignored.
  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b);

 private:
  static std::uint64_t key(NodeId u, NodeId v) noexcept {
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }
  void check_node(NodeId v) const;

  std::vector<std::vector<NodeId>> friends_;
  std::vector<std::vector<NodeId>> followers_;
  std::unordered_set<std::uint64_t> edge_set_;
};

/// Assignment of every node to one cluster label in [0, cluster_count).
struct Partition {
  std::vector<int> label;
  int cluster_count = 0;

  std::size_t size() const noexcept { return label.size(); }
  std::vector<std::size_t> cluster_sizes() const;
  std::vector<std::vector<NodeId>> clusters() const;
};

/// Subgraph induced on `nodes`; node k of `graph` is `nodes[k]` in the parent.
struct Subgraph {
  DirectedGraph graph;
  std::vector<NodeId> nodes;
};

/// Ordered-triplet counts for the feed-forward pattern {i->j, j->k, i->k}.
struct TriadCensus {
  std::uint64_t closed = 0;
  std::uint64_t open = 0;

  /// closed / (closed + open), or 0 when no triplet carries a pattern edge.
  double closed_fraction() const noexcept {
    const auto total = closed + open;
    return total == 0 ? 0.0 : static_cast<double>(closed) / static_cast<double>(total);
  }
};

struct CcdfPoint {
  std::size_t degree = 0;
  double fraction = 0.0;
};

/// Exactly `e` distinct non-loop edges drawn uniformly without replacement.
DirectedGraph random_directed_graph(std::size_t n, std::size_t e, Rng& rng);

/// e = round(density * n * (n - 1)).
std::size_t edges_for_density(std::size_t n, double density);

Subgraph induced_subgraph(const DirectedGraph& g, std::span<const NodeId> nodes);

/// Components ignoring edge direction, labelled in order of their smallest node.
Partition weakly_connected_components(const DirectedGraph& g);

/// Strongly connected components, labelled in order of their smallest node.
Partition strongly_connected_components(const DirectedGraph& g);

/// Largest SCC as an induced subgraph; ties go to the component holding the
/// smaller minimum node id. Empty graph in, empty subgraph out.
Subgraph largest_strongly_connected_component(const DirectedGraph& g);

/// Maximal induced subgraph where every node has in + out degree >= k.
Subgraph k_core(const DirectedGraph& g, std::size_t k);

TriadCensus triad_census(const DirectedGraph& g);

/// (d, fraction of nodes with in-degree >= d) for d = 0 .. max in-degree.
std::vector<CcdfPoint> in_degree_ccdf(const DirectedGraph& g);

}  // namespace ecm
