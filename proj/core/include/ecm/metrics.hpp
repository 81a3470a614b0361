#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ecm/graph.hpp"
#include "ecm/sim.hpp"

namespace ecm {

inline constexpr std::size_t kOpinionHistogramBins = 10;

/// Peak-detection settings for opinion histograms.
struct PeakSettings {
  std::size_t bins = 20;
  double min_height_fraction = 0.05;
};

struct MetricsSnapshot {
  std::uint64_t t = 0;
  double segregation = 0.0;  // NaN when one sign cluster is empty
  double triad_fraction = 0.0;
  double mean_screen_entropy = 0.0;
  double neighbor_diversity = 0.0;  // NaN when the graph has no edges
  std::vector<std::size_t> opinion_histogram;  // kOpinionHistogramBins bins over [-1, 1]
};

/// Counts of `values` in `bins` equal bins over [lo, hi]; the value hi lands
/// in the last bin, values outside the range are clamped.
std::vector<std::size_t> histogram(std::span<const double> values, std::size_t bins, double lo,
                                   double hi);

/// Bins strictly greater than each neighbour (a boundary bin has only one)
/// whose count is at least min_height_fraction * total.
std::size_t count_histogram_peaks(std::span<const std::size_t> counts, double min_height_fraction);

std::size_t count_opinion_peaks(std::span<const double> opinions, std::size_t bins,
                                double min_height_fraction);
inline std::size_t count_opinion_peaks(std::span<const double> opinions,
                                       const PeakSettings& s = {}) {
  return count_opinion_peaks(opinions, s.bins, s.min_height_fraction);
}

/// Shannon entropy (nats) of message opinions on one screen, 10 bins over [-1, 1].
double screen_entropy(const Screen& screen);

/// Mean of screen_entropy over users with a non-empty screen; 0 if none.
double mean_screen_entropy(const SimState& state);

/// max - min. Throws ParameterError on empty input.
double max_opinion_distance(std::span<const double> opinions);

/// Two clusters: 0 = {o < 0}, 1 = {o >= 0}.
Partition opinion_partition(std::span<const double> opinions);

/// 1 - |E_b| / (2 d |C0| |C1|) with d the density of g. Requires a two-cluster
/// partition with both clusters non-empty and at least one edge.
double segregation_index(const DirectedGraph& g, const Partition& partition);

/// All C(n, 2) values |o_i - o_j|. Throws ParameterError for n < 2.
std::vector<double> pairwise_opinion_distances(std::span<const double> opinions);

/// Streaming histogram of the pairwise distances over [0, 2], for inputs too
/// large to materialize.
std::vector<std::size_t> pairwise_distance_histogram(std::span<const double> opinions,
                                                     std::size_t bins);

/// Mean over edges (u, v) of |o_u - o_v|. Throws ParameterError without edges.
double neighbor_opinion_diversity(const DirectedGraph& g, std::span<const double> opinions);

/// No edge spans an opinion gap >= epsilon and every weakly connected
/// component has an internal opinion spread < epsilon.
bool is_echo_chamber(const DirectedGraph& g, std::span<const double> opinions, double epsilon);
inline bool is_echo_chamber(const SimState& s, double epsilon) {
  return is_echo_chamber(s.graph, s.opinions, epsilon);
}
inline bool is_echo_chamber(const SimState& s) { return is_echo_chamber(s, s.params.epsilon); }

/// Single-linkage chaining of sorted opinions with gaps < epsilon.
Partition epsilon_opinion_clusters(std::span<const double> opinions, double epsilon);

/// True when some node cannot place all its out-edges inside its own
/// epsilon-opinion cluster, i.e. out-degree > cluster size - 1. Such a run can
/// never segregate.
bool exclusion_check(const DirectedGraph& g, std::span<const double> opinions, double epsilon);

MetricsSnapshot take_snapshot(const SimState& state);

}  // namespace ecm
