#include "ecm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ecm/error.hpp"

namespace ecm {

DirectedGraph::DirectedGraph(std::size_t node_count)
    : friends_(node_count), followers_(node_count) {
  if (node_count > std::numeric_limits<NodeId>::max()) {
    throw ParameterError("node count exceeds the NodeId range");
  }
}

double DirectedGraph::density() const noexcept {
  const auto n = static_cast<double>(node_count());
  if (node_count() < 2) return 0.0;
  return static_cast<double>(edge_count()) / (n * (n - 1.0));
}

void DirectedGraph::check_node(NodeId v) const {
  if (v >= node_count()) {
    throw ParameterError("node " + std::to_string(v) + " out of range (N=" +
                         std::to_string(node_count()) + ")");
  }
}

bool DirectedGraph::has_edge(NodeId u, NodeId v) const {
  return edge_set_.contains(key(u, v));
}

bool DirectedGraph::add_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) throw ParameterError("self-loop " + std::to_string(u));
  if (!edge_set_.insert(key(u, v)).second) return false;
  friends_[u].push_back(v);
  followers_[v].push_back(u);
  return true;
}

namespace {

void erase_value(std::vector<NodeId>& xs, NodeId v) {
  auto it = std::find(xs.begin(), xs.end(), v);
  *it = xs.back();
  xs.pop_back();
}

// Replaces in place so that the friend list order stays stable under rewiring.
void replace_value(std::vector<NodeId>& xs, NodeId from, NodeId to) {
  *std::find(xs.begin(), xs.end(), from) = to;
}

}  // namespace

void DirectedGraph::remove_edge(NodeId u, NodeId v) {
  if (u >= node_count() || v >= node_count() || edge_set_.erase(key(u, v)) == 0) {
    throw RewireError("edge " + std::to_string(u) + "->" + std::to_string(v) +
                      " does not exist");
  }
  erase_value(friends_[u], v);
  erase_value(followers_[v], u);
}

void DirectedGraph::rewire_edge(NodeId u, NodeId old_target, NodeId new_target) {
  if (u >= node_count() || old_target >= node_count() || new_target >= node_count()) {
    throw RewireError("rewire endpoint out of range");
  }
  if (new_target == u) {
    throw RewireError("rewire would create self-loop on " + std::to_string(u));
  }
  if (!has_edge(u, old_target)) {
    throw RewireError("edge " + std::to_string(u) + "->" + std::to_string(old_target) +
                      " does not exist");
  }
  if (has_edge(u, new_target)) {
    throw RewireError(std::to_string(u) + " already follows " + std::to_string(new_target));
  }
  edge_set_.erase(key(u, old_target));
  edge_set_.insert(key(u, new_target));
  replace_value(friends_[u], old_target, new_target);
  erase_value(followers_[old_target], u);
  followers_[new_target].push_back(u);
}

std::vector<Edge> DirectedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : friends_[u]) out.push_back({u, v});
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
  return a.node_count() == b.node_count() && a.edge_set_ == b.edge_set_;
}

std::vector<std::size_t> Partition::cluster_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(cluster_count), 0);
  for (int c : label) ++sizes[static_cast<std::size_t>(c)];
  return sizes;
}

std::vector<std::vector<NodeId>> Partition::clusters() const {
  std::vector<std::vector<NodeId>> out(static_cast<std::size_t>(cluster_count));
  for (NodeId v = 0; v < label.size(); ++v) out[static_cast<std::size_t>(label[v])].push_back(v);
  return out;
}

DirectedGraph random_directed_graph(std::size_t n, std::size_t e, Rng& rng) {
  const std::uint64_t pairs = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1);
  if (e > pairs) {
    throw ParameterError("edge count " + std::to_string(e) + " exceeds n(n-1) = " +
                         std::to_string(pairs));
  }
  DirectedGraph g(n);
  if (e == 0) return g;

  auto pair_at = [n](std::uint64_t idx) {
    const auto u = static_cast<NodeId>(idx / (n - 1));
    auto v = static_cast<NodeId>(idx % (n - 1));
    if (v >= u) ++v;
    return Edge{u, v};
  };

  if (2 * e <= pairs) {
    while (g.edge_count() < e) {
      const auto edge = pair_at(uniform_index<std::uint64_t>(rng, pairs));
      g.add_edge(edge.source, edge.target);
    }
    return g;
  }
  // Dense case: draw the complement instead.
  std::unordered_set<std::uint64_t> excluded;
  while (excluded.size() < pairs - e) excluded.insert(uniform_index<std::uint64_t>(rng, pairs));
  for (std::uint64_t idx = 0; idx < pairs; ++idx) {
    if (!excluded.contains(idx)) {
      const auto edge = pair_at(idx);
      g.add_edge(edge.source, edge.target);
    }
  }
  return g;
}

std::size_t edges_for_density(std::size_t n, double density) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw ParameterError("density must lie in [0, 1]");
  }
  const double pairs = static_cast<double>(n) * (n < 1 ? 0.0 : static_cast<double>(n - 1));
  return static_cast<std::size_t>(std::llround(density * pairs));
}

Subgraph induced_subgraph(const DirectedGraph& g, std::span<const NodeId> nodes) {
  constexpr auto absent = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> index(g.node_count(), absent);
  Subgraph sub{DirectedGraph(nodes.size()), {nodes.begin(), nodes.end()}};
  for (NodeId k = 0; k < nodes.size(); ++k) index[nodes[k]] = k;
  for (NodeId k = 0; k < nodes.size(); ++k) {
    for (NodeId v : g.friends(nodes[k])) {
      if (index[v] != absent) sub.graph.add_edge(k, index[v]);
    }
  }
  return sub;
}

namespace {

// Relabels components so that labels follow the order of each component's
// smallest node id.
Partition canonical_partition(std::vector<int> raw, int count) {
  std::vector<int> remap(static_cast<std::size_t>(count), -1);
  int next = 0;
  for (int& c : raw) {
    auto& m = remap[static_cast<std::size_t>(c)];
    if (m < 0) m = next++;
    c = m;
  }
  return {std::move(raw), count};
}

}  // namespace

Partition weakly_connected_components(const DirectedGraph& g) {
  const auto n = g.node_count();
  std::vector<int> label(n, -1);
  std::vector<NodeId> stack;
  int count = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (auto adj : {g.friends(u), g.followers(u)}) {
        for (NodeId v : adj) {
          if (label[v] < 0) {
            label[v] = count;
            stack.push_back(v);
          }
        }
      }
    }
    ++count;
  }
  return {std::move(label), count};
}

Partition strongly_connected_components(const DirectedGraph& g) {
  // Iterative Tarjan.
  const auto n = g.node_count();
  constexpr auto unvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<NodeId> scc_stack;
  std::vector<int> comp(n, -1);
  int count = 0;
  std::size_t next_index = 0;

  struct Frame {
    NodeId node;
    std::size_t edge;
  };
  std::vector<Frame> call;

  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    scc_stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& frame = call.back();
      const NodeId u = frame.node;
      const auto out = g.friends(u);
      if (frame.edge < out.size()) {
        const NodeId v = out[frame.edge++];
        if (index[v] == unvisited) {
          index[v] = low[v] = next_index++;
          scc_stack.push_back(v);
          on_stack[v] = 1;
          call.push_back({v, 0});
        } else if (on_stack[v]) {
          low[u] = std::min(low[u], index[v]);
        }
        continue;
      }
      if (low[u] == index[u]) {
        NodeId w;
        do {
          w = scc_stack.back();
          scc_stack.pop_back();
          on_stack[w] = 0;
          comp[w] = count;
        } while (w != u);
        ++count;
      }
      call.pop_back();
      if (!call.empty()) {
        const NodeId parent = call.back().node;
        low[parent] = std::min(low[parent], low[u]);
      }
    }
  }
  return canonical_partition(std::move(comp), count);
}

Subgraph largest_strongly_connected_component(const DirectedGraph& g) {
  if (g.node_count() == 0) return {};
  const auto scc = strongly_connected_components(g);
  const auto sizes = scc.cluster_sizes();
  // Labels are ordered by minimum node id, so the first maximum wins ties.
  const auto best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<NodeId> nodes;
  nodes.reserve(sizes[static_cast<std::size_t>(best)]);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (scc.label[v] == best) nodes.push_back(v);
  }
  return induced_subgraph(g, nodes);
}

Subgraph k_core(const DirectedGraph& g, std::size_t k) {
  const auto n = g.node_count();
  std::vector<std::size_t> degree(n);
  std::vector<char> removed(n, 0);
  std::vector<NodeId> queue;
  for (NodeId v = 0; v < n; ++v) {
    degree[v] = g.in_degree(v) + g.out_degree(v);
    if (degree[v] < k) {
      removed[v] = 1;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const NodeId u = queue.back();
    queue.pop_back();
    for (auto adj : {g.friends(u), g.followers(u)}) {
      for (NodeId v : adj) {
        if (removed[v]) continue;
        if (--degree[v] < k) {
          removed[v] = 1;
          queue.push_back(v);
        }
      }
    }
  }
  std::vector<NodeId> keep;
  for (NodeId v = 0; v < n; ++v) {
    if (!removed[v]) keep.push_back(v);
  }
  return induced_subgraph(g, keep);
}

TriadCensus triad_census(const DirectedGraph& g) {
  const std::uint64_t n = g.node_count();
  if (n < 3) return {};

  // Per ordered triplet (i, j, k) the pattern edges are a = i->j, b = j->k,
  // c = i->k. The number of triplets with at least one of them follows from
  // inclusion-exclusion over pairwise co-occurrences.
  std::uint64_t closed = 0;
  std::uint64_t ab = 0;  // paths i->j->k with i != k
  std::uint64_t ac = 0;  // out-stars i->{j,k}
  std::uint64_t bc = 0;  // in-stars {i,j}->k
  for (NodeId v = 0; v < n; ++v) {
    const std::uint64_t in = g.in_degree(v);
    const std::uint64_t out = g.out_degree(v);
    std::uint64_t mutual = 0;
    for (NodeId w : g.friends(v)) {
      if (g.has_edge(w, v)) ++mutual;
    }
    ab += in * out - mutual;
    ac += out * (out == 0 ? 0 : out - 1);
    bc += in * (in == 0 ? 0 : in - 1);

    const auto friends = g.friends(v);
    for (NodeId k : friends) {
      for (NodeId j : friends) {
        if (j != k && g.has_edge(j, k)) ++closed;
      }
    }
  }
  const std::uint64_t singles = 3 * g.edge_count() * (n - 2);
  const std::uint64_t any = singles - ab - ac - bc + closed;
  return {closed, any - closed};
}

std::vector<CcdfPoint> in_degree_ccdf(const DirectedGraph& g) {
  const auto n = g.node_count();
  std::size_t max_degree = 0;
  for (NodeId v = 0; v < n; ++v) max_degree = std::max(max_degree, g.in_degree(v));
  std::vector<std::size_t> at_least(max_degree + 2, 0);
  for (NodeId v = 0; v < n; ++v) ++at_least[g.in_degree(v)];
  for (std::size_t d = max_degree; d-- > 0;) at_least[d] += at_least[d + 1];

  std::vector<CcdfPoint> out;
  out.reserve(max_degree + 1);
  for (std::size_t d = 0; d <= max_degree; ++d) {
    const double frac = n == 0 ? 1.0 : static_cast<double>(at_least[d]) / static_cast<double>(n);
    out.push_back({d, frac});
  }
  return out;
}

}  // namespace ecm
