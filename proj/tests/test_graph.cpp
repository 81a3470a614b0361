#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "ecm/error.hpp"
#include "ecm/graph.hpp"
#include "support/oracles.hpp"

using namespace ecm;

namespace {

DirectedGraph to_graph(const oracle::Graph& o) {
  DirectedGraph g(o.n);
  for (const auto& [u, v] : o.edges) g.add_edge(u, v);
  return g;
}

DirectedGraph from_edges(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges) {
  DirectedGraph g(n);
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

}  // namespace

TEST(DirectedGraph, AddRemoveAndDegrees) {
  DirectedGraph g(4);
  EXPECT_TRUE(g.add_edge(0, 1));
  EXPECT_FALSE(g.add_edge(0, 1));
  EXPECT_TRUE(g.add_edge(0, 2));
  EXPECT_TRUE(g.add_edge(3, 1));
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.out_degree(0), 2u);
  EXPECT_EQ(g.in_degree(1), 2u);
  EXPECT_TRUE(g.has_edge(3, 1));
  EXPECT_FALSE(g.has_edge(1, 3));
  g.remove_edge(0, 1);
  EXPECT_FALSE(g.has_edge(0, 1));
  EXPECT_EQ(g.in_degree(1), 1u);
  EXPECT_THROW(g.remove_edge(0, 1), RewireError);
  EXPECT_THROW(g.add_edge(2, 2), ParameterError);
  EXPECT_THROW(g.add_edge(0, 9), ParameterError);
}

TEST(DirectedGraph, Density) {
  EXPECT_DOUBLE_EQ(from_edges(3, {{0, 1}, {1, 2}, {2, 0}}).density(), 0.5);
  EXPECT_EQ(DirectedGraph(1).density(), 0.0);
  EXPECT_EQ(DirectedGraph().density(), 0.0);
}

TEST(DirectedGraph, RewireKeepsOutDegreeAndEdgeCount) {
  auto g = from_edges(4, {{0, 1}, {0, 2}, {3, 0}});
  g.rewire_edge(0, 1, 3);
  EXPECT_FALSE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(0, 3));
  EXPECT_EQ(g.out_degree(0), 2u);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.in_degree(1), 0u);
  EXPECT_EQ(g.in_degree(3), 1u);
}

TEST(DirectedGraph, RewireRejectsInvalidRequests) {
  auto g = from_edges(3, {{0, 1}, {0, 2}});
  EXPECT_THROW(g.rewire_edge(0, 1, 0), RewireError);  // self-loop
  EXPECT_THROW(g.rewire_edge(0, 1, 2), RewireError);  // duplicate
  EXPECT_THROW(g.rewire_edge(1, 0, 2), RewireError);  // missing edge
  EXPECT_THROW(g.rewire_edge(0, 1, 7), RewireError);  // out of range
  EXPECT_EQ(g, from_edges(3, {{0, 1}, {0, 2}}));
}

TEST(DirectedGraph, EdgesSortedAndEqualityIgnoresOrder) {
  auto a = from_edges(3, {{2, 0}, {0, 2}, {0, 1}});
  auto b = from_edges(3, {{0, 1}, {2, 0}, {0, 2}});
  EXPECT_EQ(a, b);
  const std::vector<Edge> want{{0, 1}, {0, 2}, {2, 0}};
  EXPECT_EQ(a.edges(), want);
  EXPECT_FALSE(a == from_edges(4, {{0, 1}, {2, 0}, {0, 2}}));
}

TEST(RandomGraph, ExactEdgeCountWithoutLoopsOrDuplicates) {
  Rng rng(3);
  for (std::size_t n : {2u, 5u, 30u}) {
    for (std::size_t e : {std::size_t{0}, n, n * (n - 1) / 2, n * (n - 1)}) {
      const auto g = random_directed_graph(n, e, rng);
      EXPECT_EQ(g.node_count(), n);
      EXPECT_EQ(g.edge_count(), e);
      const auto edges = g.edges();
      EXPECT_EQ(std::set<Edge>(edges.begin(), edges.end()).size(), e);
      for (const auto& ed : edges) EXPECT_NE(ed.source, ed.target);
    }
  }
}

TEST(RandomGraph, RejectsTooManyEdges) {
  Rng rng(1);
  EXPECT_THROW(random_directed_graph(3, 7, rng), ParameterError);
}

TEST(RandomGraph, SameSeedSameGraph) {
  Rng a(42), b(42);
  EXPECT_EQ(random_directed_graph(100, 400, a), random_directed_graph(100, 400, b));
}

// Each of the n(n-1) ordered pairs should be picked with probability e / n(n-1).
TEST(RandomGraph, PairFrequenciesAreUniform) {
  Rng rng(9);
  const std::size_t n = 5, e = 6, trials = 20000;
  std::map<Edge, int> hits;
  for (std::size_t t = 0; t < trials; ++t) {
    for (const auto& ed : random_directed_graph(n, e, rng).edges()) ++hits[ed];
  }
  ASSERT_EQ(hits.size(), n * (n - 1));
  const double expected = double(trials) * double(e) / double(n * (n - 1));
  for (const auto& [edge, count] : hits) EXPECT_NEAR(count, expected, 5 * std::sqrt(expected));
}

TEST(RandomGraph, EdgesForDensity) {
  EXPECT_EQ(edges_for_density(100, 400.0 / 9900.0), 400u);
  EXPECT_EQ(edges_for_density(50, 0.0), 0u);
  EXPECT_EQ(edges_for_density(10, 1.0), 90u);
  EXPECT_THROW(edges_for_density(10, 1.5), ParameterError);
}

TEST(InducedSubgraph, KeepsInternalEdgesOnly) {
  auto g = from_edges(5, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {2, 3}});
  const std::vector<NodeId> nodes{2, 3, 4};
  const auto sub = induced_subgraph(g, nodes);
  EXPECT_EQ(sub.nodes, nodes);
  EXPECT_EQ(sub.graph, from_edges(3, {{0, 1}, {1, 2}}));
}

TEST(Components, WeakSmallExamples) {
  const auto part = weakly_connected_components(from_edges(5, {{0, 1}, {3, 2}}));
  EXPECT_EQ(part.cluster_count, 3);
  EXPECT_EQ(part.label, (std::vector<int>{0, 0, 1, 1, 2}));
  EXPECT_EQ(weakly_connected_components(DirectedGraph(0)).cluster_count, 0);
}

TEST(Components, StrongCycleAndTail) {
  const auto g = from_edges(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}});
  const auto part = strongly_connected_components(g);
  EXPECT_EQ(part.cluster_count, 3);
  EXPECT_EQ(part.label[0], part.label[1]);
  EXPECT_EQ(part.label[1], part.label[2]);
  EXPECT_NE(part.label[3], part.label[4]);
  const auto big = largest_strongly_connected_component(g);
  EXPECT_EQ(big.nodes, (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(big.graph.edge_count(), 3u);
}

TEST(Components, LargestSccTieGoesToSmallerId) {
  const auto g = from_edges(4, {{2, 3}, {3, 2}, {0, 1}, {1, 0}});
  EXPECT_EQ(largest_strongly_connected_component(g).nodes, (std::vector<NodeId>{0, 1}));
  EXPECT_EQ(largest_strongly_connected_component(DirectedGraph()).nodes.size(), 0u);
}

TEST(Components, AgreeWithReachabilityOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 9;
    const auto o = oracle::random_graph(n, 0.05 + 0.3 * double(rng() % 100) / 100.0, rng);
    const auto g = to_graph(o);
    const auto r = oracle::reachability(o);
    const auto w = oracle::weak_reachability(o);
    const auto scc = strongly_connected_components(g);
    const auto wcc = weakly_connected_components(g);
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        EXPECT_EQ(scc.label[u] == scc.label[v], r[u][v] && r[v][u]);
        EXPECT_EQ(wcc.label[u] == wcc.label[v], bool(w[u][v]));
      }
    }
    // Labels ordered by smallest member.
    for (const auto* part : {&scc, &wcc}) {
      int next = 0;
      for (std::size_t v = 0; v < n; ++v) {
        if (part->label[v] == next) ++next;
        EXPECT_LT(part->label[v], next);
      }
      EXPECT_EQ(next, part->cluster_count);
    }
  }
}

TEST(KCore, HandExamples) {
  // Star 1 -> {2, 3, 4} (ids shifted to 0-based): every leaf has degree 1.
  const auto star = from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_EQ(k_core(star, 2).nodes.size(), 0u);
  EXPECT_EQ(k_core(star, 0).graph, star);
  EXPECT_EQ(k_core(star, 1).graph, star);
  // Triangle with a pendant: the 2-core is the triangle.
  const auto g = from_edges(4, {{0, 1}, {1, 2}, {2, 0}, {2, 3}});
  EXPECT_EQ(k_core(g, 2).nodes, (std::vector<NodeId>{0, 1, 2}));
}

TEST(KCore, AgreesWithRepeatedRemoval) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    const auto o = oracle::random_graph(n, 0.25, rng);
    const std::size_t k = rng() % 6;
    std::set<std::uint32_t> alive;
    for (std::uint32_t v = 0; v < n; ++v) alive.insert(v);
    for (bool changed = true; changed;) {
      changed = false;
      for (auto v : std::set<std::uint32_t>(alive)) {
        std::size_t deg = 0;
        for (const auto& [a, b] : o.edges) {
          if (alive.count(a) && alive.count(b) && (a == v || b == v)) ++deg;
        }
        if (deg < k) {
          alive.erase(v);
          changed = true;
        }
      }
    }
    const auto core = k_core(to_graph(o), k);
    EXPECT_EQ(std::vector<NodeId>(alive.begin(), alive.end()), core.nodes);
  }
}

TEST(TriadCensus, SingleTransitiveTriplet) {
  // A -> B, A -> C, C -> B is the single ordered triplet (A, C, B).
  const auto g = from_edges(3, {{0, 1}, {0, 2}, {2, 1}});
  const auto t = triad_census(g);
  EXPECT_EQ(t.closed, 1u);
  const auto o = oracle::triads(oracle::Graph{3, {{0, 1}, {0, 2}, {2, 1}}});
  EXPECT_EQ(t.open, o.open);
  EXPECT_DOUBLE_EQ(t.closed_fraction(), 1.0 / double(1 + o.open));
}

TEST(TriadCensus, EmptyAndComplete) {
  const auto empty = triad_census(DirectedGraph(5));
  EXPECT_EQ(empty.closed, 0u);
  EXPECT_EQ(empty.open, 0u);
  EXPECT_EQ(empty.closed_fraction(), 0.0);
  const auto full = triad_census(from_edges(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}));
  EXPECT_EQ(full.closed, 6u);
  EXPECT_EQ(full.open, 0u);
  EXPECT_EQ(full.closed_fraction(), 1.0);
}

TEST(TriadCensus, MatchesBruteForceOnSmallGraphs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    const auto o = oracle::random_graph(n, double(rng() % 101) / 100.0, rng);
    const auto want = oracle::triads(o);
    const auto got = triad_census(to_graph(o));
    ASSERT_EQ(got.closed, want.closed);
    ASSERT_EQ(got.open, want.open);
  }
}

TEST(InDegreeCcdf, SmallExample) {
  const auto ccdf = in_degree_ccdf(from_edges(4, {{0, 1}, {2, 1}, {3, 1}, {1, 2}}));
  ASSERT_EQ(ccdf.size(), 4u);
  EXPECT_EQ(ccdf[0].fraction, 1.0);
  EXPECT_EQ(ccdf[1].fraction, 0.5);
  EXPECT_EQ(ccdf[2].fraction, 0.25);
  EXPECT_EQ(ccdf[3].fraction, 0.25);
}

TEST(InDegreeCcdf, NonIncreasingAndStartsAtOne) {
  Rng rng(2);
  const auto ccdf = in_degree_ccdf(random_directed_graph(200, 1500, rng));
  ASSERT_FALSE(ccdf.empty());
  EXPECT_EQ(ccdf.front().fraction, 1.0);
  for (std::size_t k = 1; k < ccdf.size(); ++k) {
    EXPECT_EQ(ccdf[k].degree, k);
    EXPECT_LE(ccdf[k].fraction, ccdf[k - 1].fraction);
  }
  EXPECT_GT(ccdf.back().fraction, 0.0);
}
