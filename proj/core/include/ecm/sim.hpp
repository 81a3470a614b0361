#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecm/graph.hpp"
#include "ecm/random.hpp"

namespace ecm {

enum class RewireStrategy { random, repost, recommendation };

std::string_view to_string(RewireStrategy s) noexcept;
/// Throws ParameterError for unknown names.
RewireStrategy parse_strategy(std::string_view name);

struct Params {
  std::size_t n = 100;
  std::size_t e = 400;
  double epsilon = 0.4;  // confidence bound
  double mu = 0.5;       // influence strength
  double p = 0.5;        // repost probability
  double q = 0.5;        // unfollow probability
  std::size_t l = 10;    // screen length
  RewireStrategy strategy = RewireStrategy::random;
  std::uint64_t t_max = 100'000;
  std::uint64_t seed = 1;
  std::size_t recent_window = 100;  // recommendation pool size W
  bool record_events = true;

  /// Throws ParameterError naming the first offending field.
  void validate() const;
};

/// An originated post. The opinion is fixed at creation; only the repost
/// chain grows.
class Message {
 public:
  Message(std::uint64_t id, NodeId originator, double opinion, std::uint64_t created_at)
      : id_(id), originator_(originator), opinion_(opinion), created_at_(created_at) {}

  std::uint64_t id() const noexcept { return id_; }
  NodeId originator() const noexcept { return originator_; }
  double opinion() const noexcept { return opinion_; }
  std::uint64_t created_at() const noexcept { return created_at_; }
  const std::vector<NodeId>& repost_chain() const noexcept { return repost_chain_; }

  void add_repost(NodeId reposter) { repost_chain_.push_back(reposter); }

 private:
  std::uint64_t id_;
  NodeId originator_;
  double opinion_;
  std::uint64_t created_at_;
  std::vector<NodeId> repost_chain_;
};

struct ScreenEntry {
  std::shared_ptr<Message> message;
  NodeId deliverer = 0;   // friend whose post or repost placed it here
  bool reposted = false;  // delivered through a repost rather than the original post
};

/// Fixed-capacity feed; index 0 is the newest entry, the oldest is evicted
/// first once `capacity` entries are held.
class Screen {
 public:
  explicit Screen(std::size_t capacity = 10) : ring_(capacity) {}

  std::size_t capacity() const noexcept { return ring_.size(); }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  void push(ScreenEntry entry);
  void clear() noexcept;

  /// i-th newest entry, i < size().
  const ScreenEntry& operator[](std::size_t i) const {
    return ring_[(head_ + ring_.size() - 1 - i) % ring_.size()];
  }

 private:
  std::vector<ScreenEntry> ring_;
  std::size_t head_ = 0;  // next write position
  std::size_t size_ = 0;
};

/// An entry in the global log used by the recommendation strategy.
struct RecentPost {
  NodeId author = 0;  // poster or reposter
  double opinion = 0.0;
};

enum class EventKind { post, repost, rewire };

std::string_view to_string(EventKind k) noexcept;

struct Event {
  std::uint64_t step = 0;
  EventKind kind = EventKind::post;
  NodeId actor = 0;
  std::uint64_t message_id = 0;  // post, repost
  NodeId originator = 0;         // repost: who originated the reposted message
  NodeId unfollowed = 0;         // rewire
  NodeId new_friend = 0;         // rewire

  friend bool operator==(const Event&, const Event&) = default;
};

/// The complete mutable world of one simulation run.
struct SimState {
  Params params;
  DirectedGraph graph;
  std::vector<double> opinions;
  std::vector<Screen> screens;
  std::vector<RecentPost> recent_posts;  // ring of at most params.recent_window
  std::size_t recent_head = 0;
  std::vector<Event> event_log;  // filled only when params.record_events
  std::uint64_t t = 0;
  std::uint64_t next_message_id = 0;
  Rng rng;

  std::size_t node_count() const noexcept { return opinions.size(); }
  void push_recent(RecentPost post);
};

/// |o - m| < epsilon.
inline bool concordant(double o, double m, double epsilon) noexcept {
  return (o > m ? o - m : m - o) < epsilon;
}

/// Moves o toward the mean of the concordant message opinions on `screen` by a
/// fraction mu. Identity when nothing on the screen is concordant.
double opinion_update(double o, const Screen& screen, double epsilon, double mu);

/// Post or repost by node i. Returns the logged event.
Event act(SimState& state, NodeId i);

/// With probability q, unfollows the deliverer of a random discordant screen
/// entry and follows a strategy-chosen replacement.
std::optional<Event> maybe_unfollow(SimState& state, NodeId i);

/// Replacement friend for i under `strategy`; nullopt only when i already
/// follows every other node.
std::optional<NodeId> select_rewire_target(SimState& state, NodeId i, RewireStrategy strategy);

/// One model step: random user, influence, post/repost, unfollow.
std::vector<Event> step(SimState& state);

/// Uses `initial_graph` when given (its node count overrides params.n and its
/// edge count params.e), otherwise draws random_directed_graph(n, e).
SimState init_simulation(Params params, std::optional<DirectedGraph> initial_graph = std::nullopt);

struct RunOutcome {
  bool converged = false;
  std::uint64_t t = 0;
};

using StopCondition = std::function<bool(const SimState&)>;

/// Evaluates `stop` at the current step and then every `check_every` steps;
/// stops at the first true evaluation or once t reaches params.t_max.
RunOutcome run_until(SimState& state, const StopCondition& stop, std::uint64_t check_every);

}  // namespace ecm
