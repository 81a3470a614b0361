#include "ecm/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "ecm/error.hpp"

namespace ecm {

namespace {

std::size_t bin_of(double v, std::size_t bins, double lo, double hi) {
  const double x = (v - lo) / (hi - lo) * static_cast<double>(bins);
  if (!(x > 0.0)) return 0;
  const auto b = static_cast<std::size_t>(x);
  return std::min(b, bins - 1);
}

}  // namespace

std::vector<std::size_t> histogram(std::span<const double> values, std::size_t bins, double lo,
                                   double hi) {
  if (bins == 0) throw ParameterError("histogram needs at least one bin");
  if (!(hi > lo)) throw ParameterError("histogram range is empty");
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) ++counts[bin_of(v, bins, lo, hi)];
  return counts;
}

std::size_t count_histogram_peaks(std::span<const std::size_t> counts, double min_height_fraction) {
  const auto total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  const double min_height = min_height_fraction * static_cast<double>(total);
  std::size_t peaks = 0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    const auto c = counts[b];
    if (c == 0 || static_cast<double>(c) < min_height) continue;
    const bool above_left = b == 0 || c > counts[b - 1];
    const bool above_right = b + 1 == counts.size() || c > counts[b + 1];
    if (above_left && above_right) ++peaks;
  }
  return peaks;
}

std::size_t count_opinion_peaks(std::span<const double> opinions, std::size_t bins,
                                double min_height_fraction) {
  if (bins < 3) throw ParameterError("peak detection needs at least 3 bins");
  const auto counts = histogram(opinions, bins, -1.0, 1.0);
  return count_histogram_peaks(counts, min_height_fraction);
}

double screen_entropy(const Screen& screen) {
  if (screen.empty()) return 0.0;
  std::array<std::size_t, kOpinionHistogramBins> counts{};
  for (std::size_t k = 0; k < screen.size(); ++k) {
    ++counts[bin_of(screen[k].message->opinion(), kOpinionHistogramBins, -1.0, 1.0)];
  }
  const double total = static_cast<double>(screen.size());
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double pr = static_cast<double>(c) / total;
    h -= pr * std::log(pr);
  }
  return h;
}

double mean_screen_entropy(const SimState& state) {
  double sum = 0.0;
  std::size_t users = 0;
  for (const auto& screen : state.screens) {
    if (screen.empty()) continue;
    sum += screen_entropy(screen);
    ++users;
  }
  return users == 0 ? 0.0 : sum / static_cast<double>(users);
}

double max_opinion_distance(std::span<const double> opinions) {
  if (opinions.empty()) throw ParameterError("max_opinion_distance of an empty opinion set");
  const auto [lo, hi] = std::minmax_element(opinions.begin(), opinions.end());
  return *hi - *lo;
}

Partition opinion_partition(std::span<const double> opinions) {
  Partition part{std::vector<int>(opinions.size()), 2};
  for (std::size_t i = 0; i < opinions.size(); ++i) part.label[i] = opinions[i] < 0.0 ? 0 : 1;
  return part;
}

double segregation_index(const DirectedGraph& g, const Partition& partition) {
  if (partition.cluster_count != 2 || partition.size() != g.node_count()) {
    throw ParameterError("segregation index needs a two-cluster partition of every node");
  }
  const auto sizes = partition.cluster_sizes();
  if (sizes[0] == 0 || sizes[1] == 0) {
    throw ParameterError("segregation index needs two non-empty clusters");
  }
  if (g.edge_count() == 0) throw ParameterError("segregation index of a graph without edges");
  std::size_t cross = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.friends(u)) {
      if (partition.label[u] != partition.label[v]) ++cross;
    }
  }
  const double expected =
      2.0 * g.density() * static_cast<double>(sizes[0]) * static_cast<double>(sizes[1]);
  return 1.0 - static_cast<double>(cross) / expected;
}

std::vector<double> pairwise_opinion_distances(std::span<const double> opinions) {
  const auto n = opinions.size();
  if (n < 2) throw ParameterError("pairwise distances need at least two opinions");
  std::vector<double> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(std::abs(opinions[i] - opinions[j]));
  }
  return out;
}

std::vector<std::size_t> pairwise_distance_histogram(std::span<const double> opinions,
                                                     std::size_t bins) {
  const auto n = opinions.size();
  if (n < 2) throw ParameterError("pairwise distances need at least two opinions");
  if (bins == 0) throw ParameterError("histogram needs at least one bin");
  std::vector<std::size_t> counts(bins, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ++counts[bin_of(std::abs(opinions[i] - opinions[j]), bins, 0.0, 2.0)];
    }
  }
  return counts;
}

double neighbor_opinion_diversity(const DirectedGraph& g, std::span<const double> opinions) {
  if (g.edge_count() == 0) throw ParameterError("neighbor diversity of a graph without edges");
  double sum = 0.0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.friends(u)) sum += std::abs(opinions[u] - opinions[v]);
  }
  return sum / static_cast<double>(g.edge_count());
}

bool is_echo_chamber(const DirectedGraph& g, std::span<const double> opinions, double epsilon) {
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.friends(u)) {
      if (!concordant(opinions[u], opinions[v], epsilon)) return false;
    }
  }
  const auto wcc = weakly_connected_components(g);
  const auto k = static_cast<std::size_t>(wcc.cluster_count);
  std::vector<double> lo(k, std::numeric_limits<double>::infinity());
  std::vector<double> hi(k, -std::numeric_limits<double>::infinity());
  for (std::size_t v = 0; v < opinions.size(); ++v) {
    const auto c = static_cast<std::size_t>(wcc.label[v]);
    lo[c] = std::min(lo[c], opinions[v]);
    hi[c] = std::max(hi[c], opinions[v]);
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (!(hi[c] - lo[c] < epsilon)) return false;
  }
  return true;
}

Partition epsilon_opinion_clusters(std::span<const double> opinions, double epsilon) {
  const auto n = opinions.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return opinions[a] < opinions[b]; });
  Partition part{std::vector<int>(n, 0), n == 0 ? 0 : 1};
  for (std::size_t k = 1; k < n; ++k) {
    if (!(opinions[order[k]] - opinions[order[k - 1]] < epsilon)) ++part.cluster_count;
    part.label[order[k]] = part.cluster_count - 1;
  }
  return part;
}

bool exclusion_check(const DirectedGraph& g, std::span<const double> opinions, double epsilon) {
  const auto clusters = epsilon_opinion_clusters(opinions, epsilon);
  const auto sizes = clusters.cluster_sizes();
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.out_degree(v) + 1 > sizes[static_cast<std::size_t>(clusters.label[v])]) return true;
  }
  return false;
}

MetricsSnapshot take_snapshot(const SimState& state) {
  MetricsSnapshot snap;
  snap.t = state.t;
  const auto part = opinion_partition(state.opinions);
  const auto sizes = part.cluster_sizes();
  snap.segregation = (sizes[0] > 0 && sizes[1] > 0 && state.graph.edge_count() > 0)
                         ? segregation_index(state.graph, part)
                         : std::numeric_limits<double>::quiet_NaN();
  snap.triad_fraction = triad_census(state.graph).closed_fraction();
  snap.mean_screen_entropy = mean_screen_entropy(state);
  snap.neighbor_diversity = state.graph.edge_count() > 0
                                ? neighbor_opinion_diversity(state.graph, state.opinions)
                                : std::numeric_limits<double>::quiet_NaN();
  snap.opinion_histogram = histogram(state.opinions, kOpinionHistogramBins, -1.0, 1.0);
  return snap;
}

}  // namespace ecm
