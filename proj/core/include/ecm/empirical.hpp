#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <list>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ecm/graph.hpp"
#include "ecm/sim.hpp"

namespace ecm {

/// Largest SCC of an empirical retweet network (edge i -> j: j retweeted i)
/// together with a two-way partition read from a labels file.
struct LabeledNetwork {
  DirectedGraph graph;
  std::vector<std::string> names;        // external id of each SCC node
  Partition partition;                   // labels sorted lexicographically
  std::vector<std::string> label_names;  // label_names[c] is cluster c
  std::size_t raw_nodes = 0;             // before SCC restriction
  std::size_t raw_edges = 0;
};

/// Labels file: "node_id label" lines, '#' comments. Throws FormatError on
/// malformed lines and DataError listing SCC nodes without a label.
LabeledNetwork load_labeled_network(std::istream& edges, const std::string& edges_name,
                                    std::istream& labels, const std::string& labels_name);
LabeledNetwork load_labeled_network(const std::filesystem::path& edges_path,
                                    const std::filesystem::path& labels_path);

/// Binary adoption vector over the D most popular hashtags.
class HashtagVector {
 public:
  HashtagVector(std::string user, std::size_t dimension);

  const std::string& user() const noexcept { return user_; }
  std::size_t dimension() const noexcept { return dimension_; }
  bool test(std::size_t k) const { return (words_[k / 64] >> (k % 64)) & 1U; }
  void set(std::size_t k) { words_[k / 64] |= std::uint64_t{1} << (k % 64); }
  /// L1 norm: number of adopted hashtags.
  std::size_t norm() const noexcept;
  /// Number of hashtags adopted by both.
  std::size_t shared(const HashtagVector& other) const;

 private:
  std::string user_;
  std::size_t dimension_;
  std::vector<std::uint64_t> words_;
};

struct HashtagData {
  std::vector<std::string> hashtags;   // the D selected tags, most popular first
  std::vector<HashtagVector> vectors;  // users adopting at least one selected tag
  std::size_t total_users = 0;         // distinct users in the adoption file

  double coverage() const noexcept {
    return total_users == 0 ? 0.0
                            : static_cast<double>(vectors.size()) / static_cast<double>(total_users);
  }
};

/// Adoption file: "user_id hashtag" lines, '#' comments. Popularity is the
/// number of distinct adopting users; ties break by hashtag string.
HashtagData hashtag_vectors(std::istream& in, const std::string& source_name, std::size_t d = 20);
HashtagData hashtag_vectors(const std::filesystem::path& path, std::size_t d = 20);

/// 1 - (a . b) / min(|a|, |b|). Throws ParameterError on a zero vector or a
/// dimension mismatch.
double empirical_opinion_distance(const HashtagVector& a, const HashtagVector& b);

/// Histogram of d_t over all unordered pairs, `bins` equal bins over [0, 1].
std::vector<std::size_t> hashtag_distance_histogram(std::span<const HashtagVector> vectors,
                                                    std::size_t bins);

/// Synthetic retweet network from an event log: repost events scanned
/// newest-first, edge originator -> reposter, keeping the `e` most recent
/// distinct edges. Node ids are simulation ids in [0, n).
DirectedGraph build_retweet_network(std::span<const Event> log, std::size_t e, std::size_t n);

/// Incremental equivalent of build_retweet_network that keeps only the `e`
/// most recent distinct edges, so long runs need not retain their event log.
class RetweetTracker {
 public:
  RetweetTracker(std::size_t node_count, std::size_t capacity);

  void record(const Event& ev);
  std::size_t size() const noexcept { return order_.size(); }
  DirectedGraph network() const;

 private:
  std::size_t node_count_;
  std::size_t capacity_;
  std::list<Edge> order_;  // newest first
  std::unordered_map<std::uint64_t, std::list<Edge>::iterator> where_;
};

struct ValidationOptions {
  std::uint64_t epoch_budget = 10'000;
  std::uint64_t snapshot_every = 10;  // epochs
  std::size_t distance_bins = 20;
  double min_peak_fraction = 0.05;
};

struct ValidationSnapshot {
  std::uint64_t epoch = 0;
  std::uint64_t t = 0;
  std::size_t retweet_edges = 0;  // before SCC restriction
  std::size_t scc_nodes = 0;
  std::size_t scc_edges = 0;
  double segregation = 0.0;  // NaN when undefined for this snapshot
  double triad_fraction = 0.0;
  double diversity = 0.0;
};

struct ValidationReport {
  Params params;
  std::vector<ValidationSnapshot> series;
  std::size_t empirical_nodes = 0;
  std::size_t empirical_edges = 0;
  double empirical_segregation = 0.0;
  double empirical_triad_fraction = 0.0;
  std::vector<std::size_t> do_histogram;  // bins over [0, 2]
  std::vector<std::size_t> dt_histogram;  // bins over [0, 1]; empty without hashtag data
  std::size_t do_peaks = 0;
  std::size_t dt_peaks = 0;
  double hashtag_coverage = 0.0;
  std::uint64_t stop_epoch = 0;
  bool censored = false;
};

/// Segregation of the empirical network under its file labels.
double empirical_segregation(const LabeledNetwork& net);

/// Simulates `params` epoch by epoch (N steps each), snapshotting the
/// synthetic retweet network every `snapshot_every` epochs, until its
/// segregation reaches the empirical value or the epoch budget runs out.
/// `params.n` is expected to equal the empirical node count.
ValidationReport validation_run(const Params& params, const LabeledNetwork& empirical,
                                const HashtagData* hashtags, const ValidationOptions& options = {});

}  // namespace ecm
