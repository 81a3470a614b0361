#include "ecm/empirical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <unordered_set>

#include "ecm/error.hpp"
#include "ecm/graph_io.hpp"
#include "ecm/metrics.hpp"

namespace ecm {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

// Calls fn(line_no, fields) for every non-comment line with at least two fields.
template <typename Fn>
void for_each_pair_line(std::istream& in, const std::string& source, const char* expected, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() < 2) throw FormatError(source, line_no, std::string("expected '") + expected + "'");
    fn(fields[0], fields[1]);
  }
  if (in.bad()) throw DataError("read failure on " + source);
}

std::uint64_t edge_key(NodeId u, NodeId v) { return (std::uint64_t{u} << 32) | v; }

}  // namespace

LabeledNetwork load_labeled_network(std::istream& edges, const std::string& edges_name,
                                    std::istream& labels, const std::string& labels_name) {
  auto named = read_edge_list(edges, edges_name);
  LabeledNetwork net;
  net.raw_nodes = named.graph.node_count();
  net.raw_edges = named.graph.edge_count();
  auto scc = largest_strongly_connected_component(named.graph);

  std::unordered_map<std::string, std::string> label_of;
  for_each_pair_line(labels, labels_name, "node_id label", [&](std::string_view id, std::string_view label) {
    label_of.insert_or_assign(std::string(id), std::string(label));
  });

  std::vector<std::string> missing;
  std::set<std::string> distinct;
  for (NodeId v : scc.nodes) {
    const auto& name = named.index.name(v);
    auto it = label_of.find(name);
    if (it == label_of.end()) {
      missing.push_back(name);
    } else {
      distinct.insert(it->second);
    }
  }
  if (!missing.empty()) {
    std::string msg = labels_name + ": " + std::to_string(missing.size()) +
                      " node(s) of the largest SCC have no label:";
    for (std::size_t k = 0; k < std::min<std::size_t>(missing.size(), 20); ++k) msg += " " + missing[k];
    if (missing.size() > 20) msg += " ...";
    throw DataError(msg);
  }

  net.label_names.assign(distinct.begin(), distinct.end());
  std::map<std::string, int> label_index;
  for (std::size_t c = 0; c < net.label_names.size(); ++c) label_index[net.label_names[c]] = static_cast<int>(c);
  net.partition.cluster_count = static_cast<int>(net.label_names.size());
  net.partition.label.reserve(scc.nodes.size());
  net.names.reserve(scc.nodes.size());
  for (NodeId v : scc.nodes) {
    net.names.push_back(named.index.name(v));
    net.partition.label.push_back(label_index.at(label_of.at(net.names.back())));
  }
  net.graph = std::move(scc.graph);
  return net;
}

LabeledNetwork load_labeled_network(const std::filesystem::path& edges_path,
                                    const std::filesystem::path& labels_path) {
  auto edges = open_input(edges_path);
  auto labels = open_input(labels_path);
  return load_labeled_network(edges, edges_path.string(), labels, labels_path.string());
}

HashtagVector::HashtagVector(std::string user, std::size_t dimension)
    : user_(std::move(user)), dimension_(dimension), words_((dimension + 63) / 64, 0) {}

std::size_t HashtagVector::norm() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t HashtagVector::shared(const HashtagVector& other) const {
  std::size_t total = 0;
  for (std::size_t k = 0; k < words_.size(); ++k) {
    total += static_cast<std::size_t>(std::popcount(words_[k] & other.words_[k]));
  }
  return total;
}

HashtagData hashtag_vectors(std::istream& in, const std::string& source_name, std::size_t d) {
  if (d == 0) throw ParameterError("hashtag dimension must be >= 1");
  NodeIndex users;
  std::unordered_map<std::string, std::size_t> tag_index;
  std::vector<std::string> tags;
  std::unordered_set<std::uint64_t> adoptions;
  std::vector<std::pair<NodeId, std::size_t>> pairs;
  for_each_pair_line(in, source_name, "user_id hashtag", [&](std::string_view user, std::string_view tag) {
    const NodeId u = users.intern(user);
    auto [it, inserted] = tag_index.try_emplace(std::string(tag), tags.size());
    if (inserted) tags.emplace_back(tag);
    if (adoptions.insert((std::uint64_t{u} << 32) | it->second).second) pairs.emplace_back(u, it->second);
  });

  std::vector<std::size_t> popularity(tags.size(), 0);
  for (const auto& [u, t] : pairs) ++popularity[t];
  std::vector<std::size_t> order(tags.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (popularity[a] != popularity[b]) return popularity[a] > popularity[b];
    return tags[a] < tags[b];
  });
  order.resize(std::min(d, order.size()));

  HashtagData data;
  data.total_users = users.size();
  std::vector<int> slot(tags.size(), -1);
  for (std::size_t k = 0; k < order.size(); ++k) {
    slot[order[k]] = static_cast<int>(k);
    data.hashtags.push_back(tags[order[k]]);
  }
  std::vector<HashtagVector> all;
  all.reserve(users.size());
  for (NodeId u = 0; u < users.size(); ++u) all.emplace_back(users.name(u), d);
  for (const auto& [u, t] : pairs) {
    if (slot[t] >= 0) all[u].set(static_cast<std::size_t>(slot[t]));
  }
  for (auto& v : all) {
    if (v.norm() > 0) data.vectors.push_back(std::move(v));
  }
  return data;
}

HashtagData hashtag_vectors(const std::filesystem::path& path, std::size_t d) {
  auto in = open_input(path);
  return hashtag_vectors(in, path.string(), d);
}

double empirical_opinion_distance(const HashtagVector& a, const HashtagVector& b) {
  if (a.dimension() != b.dimension()) throw ParameterError("hashtag vectors differ in dimension");
  const auto na = a.norm();
  const auto nb = b.norm();
  if (na == 0 || nb == 0) throw ParameterError("empirical opinion distance of a zero vector");
  return 1.0 - static_cast<double>(a.shared(b)) / static_cast<double>(std::min(na, nb));
}

std::vector<std::size_t> hashtag_distance_histogram(std::span<const HashtagVector> vectors,
                                                    std::size_t bins) {
  if (bins == 0) throw ParameterError("histogram needs at least one bin");
  std::vector<std::size_t> counts(bins, 0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      // d_t = (m - s) / m exactly; binning in integers avoids 1 - 4/5 landing
      // just below the 0.2 edge.
      const auto m = std::min(vectors[i].norm(), vectors[j].norm());
      if (m == 0 || vectors[i].dimension() != vectors[j].dimension()) {
        empirical_opinion_distance(vectors[i], vectors[j]);  // throws
      }
      const auto b = (m - vectors[i].shared(vectors[j])) * bins / m;
      ++counts[std::min(b, bins - 1)];
    }
  }
  return counts;
}

DirectedGraph build_retweet_network(std::span<const Event> log, std::size_t e, std::size_t n) {
  DirectedGraph g(n);
  for (auto it = log.rbegin(); it != log.rend() && g.edge_count() < e; ++it) {
    if (it->kind != EventKind::repost || it->originator == it->actor) continue;
    g.add_edge(it->originator, it->actor);
  }
  return g;
}

RetweetTracker::RetweetTracker(std::size_t node_count, std::size_t capacity)
    : node_count_(node_count), capacity_(capacity) {}

void RetweetTracker::record(const Event& ev) {
  if (ev.kind != EventKind::repost || ev.originator == ev.actor || capacity_ == 0) return;
  const auto key = edge_key(ev.originator, ev.actor);
  if (auto it = where_.find(key); it != where_.end()) {
    order_.splice(order_.begin(), order_, it->second);
    return;
  }
  order_.push_front({ev.originator, ev.actor});
  where_.emplace(key, order_.begin());
  if (order_.size() > capacity_) {
    const auto& oldest = order_.back();
    where_.erase(edge_key(oldest.source, oldest.target));
    order_.pop_back();
  }
}

DirectedGraph RetweetTracker::network() const {
  DirectedGraph g(node_count_);
  for (const auto& edge : order_) g.add_edge(edge.source, edge.target);
  return g;
}

double empirical_segregation(const LabeledNetwork& net) {
  if (net.partition.cluster_count != 2) {
    throw DataError("segregation needs exactly two labels, found " +
                    std::to_string(net.partition.cluster_count));
  }
  return segregation_index(net.graph, net.partition);
}

namespace {

ValidationSnapshot measure_snapshot(const SimState& state, const RetweetTracker& tracker,
                                    std::uint64_t epoch) {
  ValidationSnapshot snap;
  snap.epoch = epoch;
  snap.t = state.t;
  const auto retweets = tracker.network();
  snap.retweet_edges = retweets.edge_count();
  const auto scc = largest_strongly_connected_component(retweets);
  snap.scc_nodes = scc.graph.node_count();
  snap.scc_edges = scc.graph.edge_count();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  snap.segregation = nan;
  snap.diversity = nan;
  snap.triad_fraction = triad_census(scc.graph).closed_fraction();
  if (snap.scc_edges == 0) return snap;

  std::vector<double> opinions;
  opinions.reserve(scc.nodes.size());
  for (NodeId v : scc.nodes) opinions.push_back(state.opinions[v]);
  const auto part = opinion_partition(opinions);
  const auto sizes = part.cluster_sizes();
  if (sizes[0] > 0 && sizes[1] > 0) snap.segregation = segregation_index(scc.graph, part);
  snap.diversity = neighbor_opinion_diversity(scc.graph, opinions);
  return snap;
}

}  // namespace

ValidationReport validation_run(const Params& params, const LabeledNetwork& empirical,
                                const HashtagData* hashtags, const ValidationOptions& options) {
  if (options.snapshot_every < 1) throw ParameterError("snapshot_every must be >= 1");
  ValidationReport report;
  report.empirical_nodes = empirical.graph.node_count();
  report.empirical_edges = empirical.graph.edge_count();
  report.empirical_segregation = empirical_segregation(empirical);
  report.empirical_triad_fraction = triad_census(empirical.graph).closed_fraction();

  Params run_params = params;
  run_params.record_events = false;
  auto state = init_simulation(run_params);
  report.params = state.params;
  const auto n = state.node_count();
  RetweetTracker tracker(n, report.empirical_edges);

  report.censored = true;
  for (std::uint64_t epoch = 1; epoch <= options.epoch_budget; ++epoch) {
    for (std::size_t k = 0; k < n; ++k) {
      for (const auto& ev : step(state)) tracker.record(ev);
    }
    if (epoch % options.snapshot_every != 0) continue;
    report.series.push_back(measure_snapshot(state, tracker, epoch));
    report.stop_epoch = epoch;
    const double s = report.series.back().segregation;
    if (!std::isnan(s) && s >= report.empirical_segregation) {
      report.censored = false;
      break;
    }
  }

  if (n >= 2) {
    report.do_histogram = pairwise_distance_histogram(state.opinions, options.distance_bins);
    report.do_peaks = count_histogram_peaks(report.do_histogram, options.min_peak_fraction);
  }
  if (hashtags) {
    report.hashtag_coverage = hashtags->coverage();
    std::unordered_set<std::string> in_network(empirical.names.begin(), empirical.names.end());
    std::vector<HashtagVector> users;
    for (const auto& v : hashtags->vectors) {
      if (in_network.contains(v.user())) users.push_back(v);
    }
    report.dt_histogram = hashtag_distance_histogram(users, options.distance_bins);
    report.dt_peaks = count_histogram_peaks(report.dt_histogram, options.min_peak_fraction);
  }
  return report;
}

}  // namespace ecm
