#include "ecm/sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "ecm/error.hpp"

namespace ecm {

std::string_view to_string(RewireStrategy s) noexcept {
  switch (s) {
    case RewireStrategy::random: return "random";
    case RewireStrategy::repost: return "repost";
    case RewireStrategy::recommendation: return "recommendation";
  }
  return "random";
}

RewireStrategy parse_strategy(std::string_view name) {
  if (name == "random") return RewireStrategy::random;
  if (name == "repost") return RewireStrategy::repost;
  if (name == "recommendation") return RewireStrategy::recommendation;
  throw ParameterError("unknown rewiring strategy '" + std::string(name) +
                       "' (expected random, repost or recommendation)");
}

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::post: return "post";
    case EventKind::repost: return "repost";
    case EventKind::rewire: return "rewire";
  }
  return "post";
}

void Params::validate() const {
  auto probability = [](double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw ParameterError(std::string(name) + " must lie in [0, 1], got " + std::to_string(x));
    }
  };
  probability(mu, "mu");
  probability(p, "p");
  probability(q, "q");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ParameterError("epsilon must be a finite value >= 0");
  }
  if (l < 1) throw ParameterError("l (screen length) must be >= 1");
  if (recent_window < 1) throw ParameterError("recent_window must be >= 1");
  const std::uint64_t pairs = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1);
  if (e > pairs) {
    throw ParameterError("e = " + std::to_string(e) + " exceeds n(n-1) = " + std::to_string(pairs));
  }
}

void Screen::push(ScreenEntry entry) {
  ring_[head_] = std::move(entry);
  head_ = (head_ + 1) % ring_.size();
  if (size_ < ring_.size()) ++size_;
}

void Screen::clear() noexcept {
  for (auto& e : ring_) e = ScreenEntry{};
  head_ = 0;
  size_ = 0;
}

void SimState::push_recent(RecentPost post) {
  const auto window = params.recent_window;
  if (recent_posts.size() < window) {
    recent_posts.push_back(post);
  } else {
    recent_posts[recent_head] = post;
  }
  recent_head = (recent_head + 1) % window;
}

double opinion_update(double o, const Screen& screen, double epsilon, double mu) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < screen.size(); ++k) {
    const double m = screen[k].message->opinion();
    if (concordant(o, m, epsilon)) {
      sum += m;
      ++count;
    }
  }
  if (count == 0) return o;
  return o + mu * (sum / static_cast<double>(count) - o);
}

namespace {

void deliver(SimState& state, const std::shared_ptr<Message>& msg, NodeId from, bool reposted) {
  for (NodeId follower : state.graph.followers(from)) {
    state.screens[follower].push({msg, from, reposted});
  }
}

void log_event(SimState& state, const Event& ev) {
  if (state.params.record_events) state.event_log.push_back(ev);
}

std::optional<NodeId> random_non_friend(const SimState& state, NodeId i, Rng& rng) {
  const auto n = state.graph.node_count();
  const auto out = state.graph.out_degree(i);
  if (out + 1 >= n) return std::nullopt;
  if (2 * (out + 1) <= n) {
    // At least half of all nodes qualify, so rejection terminates quickly.
    for (;;) {
      const auto v = uniform_index<NodeId>(rng, static_cast<NodeId>(n));
      if (v != i && !state.graph.has_edge(i, v)) return v;
    }
  }
  std::vector<NodeId> pool;
  pool.reserve(n - out - 1);
  for (NodeId v = 0; v < n; ++v) {
    if (v != i && !state.graph.has_edge(i, v)) pool.push_back(v);
  }
  return pool[uniform_index(rng, pool.size())];
}

void add_candidate(std::vector<NodeId>& pool, const SimState& state, NodeId i, NodeId v) {
  if (v == i || state.graph.has_edge(i, v)) return;
  if (std::find(pool.begin(), pool.end(), v) == pool.end()) pool.push_back(v);
}

}  // namespace

Event act(SimState& state, NodeId i) {
  const double o = state.opinions[i];
  const auto& screen = state.screens[i];
  if (uniform01(state.rng) < state.params.p) {
    std::vector<std::size_t> candidates;
    for (std::size_t k = 0; k < screen.size(); ++k) {
      if (concordant(o, screen[k].message->opinion(), state.params.epsilon)) candidates.push_back(k);
    }
    if (!candidates.empty()) {
      // Copy the handle: delivery may overwrite the slot it came from.
      auto msg = screen[candidates[uniform_index(state.rng, candidates.size())]].message;
      msg->add_repost(i);
      deliver(state, msg, i, true);
      state.push_recent({i, msg->opinion()});
      Event ev{state.t, EventKind::repost, i, msg->id(), msg->originator(), 0, 0};
      log_event(state, ev);
      return ev;
    }
  }
  auto msg = std::make_shared<Message>(state.next_message_id++, i, o, state.t);
  deliver(state, msg, i, false);
  state.push_recent({i, o});
  Event ev{state.t, EventKind::post, i, msg->id(), i, 0, 0};
  log_event(state, ev);
  return ev;
}

std::optional<NodeId> select_rewire_target(SimState& state, NodeId i, RewireStrategy strategy) {
  std::vector<NodeId> pool;
  if (strategy == RewireStrategy::repost) {
    const auto& screen = state.screens[i];
    for (std::size_t k = 0; k < screen.size(); ++k) {
      if (screen[k].reposted) add_candidate(pool, state, i, screen[k].message->originator());
    }
  } else if (strategy == RewireStrategy::recommendation) {
    const double o = state.opinions[i];
    // Walk newest first so candidate order does not depend on ring position.
    const auto count = state.recent_posts.size();
    for (std::size_t k = 0; k < count; ++k) {
      const auto& post = state.recent_posts[(state.recent_head + count - 1 - k) % count];
      if (concordant(o, post.opinion, state.params.epsilon)) add_candidate(pool, state, i, post.author);
    }
  }
  if (!pool.empty()) return pool[uniform_index(state.rng, pool.size())];
  return random_non_friend(state, i, state.rng);
}

std::optional<Event> maybe_unfollow(SimState& state, NodeId i) {
  if (!(uniform01(state.rng) < state.params.q)) return std::nullopt;
  const double o = state.opinions[i];
  const auto& screen = state.screens[i];
  std::vector<NodeId> discordant_deliverers;
  for (std::size_t k = 0; k < screen.size(); ++k) {
    const auto& entry = screen[k];
    if (!concordant(o, entry.message->opinion(), state.params.epsilon) &&
        state.graph.has_edge(i, entry.deliverer)) {
      discordant_deliverers.push_back(entry.deliverer);
    }
  }
  if (discordant_deliverers.empty()) return std::nullopt;
  const NodeId unfollowed = discordant_deliverers[uniform_index(state.rng, discordant_deliverers.size())];
  // `unfollowed` is still a friend here, so it is excluded from every pool.
  const auto target = select_rewire_target(state, i, state.params.strategy);
  if (!target) return std::nullopt;
  state.graph.rewire_edge(i, unfollowed, *target);
  Event ev{state.t, EventKind::rewire, i, 0, 0, unfollowed, *target};
  log_event(state, ev);
  return ev;
}

std::vector<Event> step(SimState& state) {
  const auto n = static_cast<NodeId>(state.node_count());
  std::vector<Event> events;
  if (n == 0) {
    ++state.t;
    return events;
  }
  const NodeId i = uniform_index(state.rng, n);
  auto& o = state.opinions[i];
  o = opinion_update(o, state.screens[i], state.params.epsilon, state.params.mu);
  assert(o >= -1.0 && o <= 1.0);
  events.push_back(act(state, i));
  if (auto ev = maybe_unfollow(state, i)) events.push_back(*ev);
  ++state.t;
  return events;
}

SimState init_simulation(Params params, std::optional<DirectedGraph> initial_graph) {
  if (initial_graph) {
    params.n = initial_graph->node_count();
    params.e = initial_graph->edge_count();
  }
  params.validate();

  SimState state;
  state.rng.seed(params.seed);
  state.graph = initial_graph ? std::move(*initial_graph)
                              : random_directed_graph(params.n, params.e, state.rng);
  state.opinions.resize(params.n);
  std::uniform_real_distribution<double> opinion(-1.0, 1.0);
  for (auto& o : state.opinions) o = opinion(state.rng);
  state.screens.assign(params.n, Screen(params.l));
  state.recent_posts.reserve(params.recent_window);
  state.params = params;
  return state;
}

RunOutcome run_until(SimState& state, const StopCondition& stop, std::uint64_t check_every) {
  if (check_every < 1) throw ParameterError("check_every must be >= 1");
  for (;;) {
    if (stop(state)) return {true, state.t};
    if (state.t >= state.params.t_max) return {false, state.t};
    const auto budget = std::min(check_every, state.params.t_max - state.t);
    for (std::uint64_t k = 0; k < budget; ++k) step(state);
  }
}

}  // namespace ecm
