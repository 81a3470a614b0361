#include "ecm/session.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <system_error>
#include <vector>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "ecm/error.hpp"
#include "ecm/graph_io.hpp"
#include "ecm/metrics.hpp"

namespace ecm {

namespace {

// Keeps a single step request from monopolising a session for minutes.
constexpr std::int64_t kMaxStepsPerRequest = 100'000'000;
constexpr std::size_t kMaxLineBytes = 1 << 20;

constexpr std::array<std::string_view, 8> kLiveKeys = {
    "epsilon", "mu", "p", "q", "l", "strategy", "recent_window", "t_max"};

nlohmann::json error(const std::string& msg) { return {{"type", "error"}, {"msg", msg}}; }

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
}

nlohmann::json edge_list(const std::vector<Edge>& edges) {
  auto out = nlohmann::json::array();
  for (const auto& e : edges) out.push_back({e.source, e.target});
  return out;
}

nlohmann::json metrics_json(const SimState& state) {
  const auto snap = take_snapshot(state);
  return {{"segregation", number_or_null(snap.segregation)},
          {"triad_fraction", snap.triad_fraction},
          {"entropy", snap.mean_screen_entropy},
          {"diversity", number_or_null(snap.neighbor_diversity)},
          {"peaks", count_opinion_peaks(state.opinions)},
          {"histogram", snap.opinion_histogram},
          {"echo_chamber", is_echo_chamber(state)}};
}

void resize_screens(SimState& state, std::size_t l) {
  for (auto& screen : state.screens) {
    Screen resized(l);
    for (std::size_t k = std::min(screen.size(), l); k-- > 0;) resized.push(screen[k]);
    screen = std::move(resized);
  }
}

void resize_recent(SimState& state, std::size_t window) {
  const auto count = state.recent_posts.size();
  std::vector<RecentPost> ordered;  // oldest first
  for (std::size_t k = std::min(count, window); k-- > 0;) {
    ordered.push_back(state.recent_posts[(state.recent_head + count - 1 - k) % count]);
  }
  state.recent_posts = std::move(ordered);
  state.recent_head = state.recent_posts.size() % window;
}

}  // namespace

bool is_live_param(std::string_view key) {
  return std::find(kLiveKeys.begin(), kLiveKeys.end(), key) != kLiveKeys.end();
}

Session::Session(RunConfig defaults) : defaults_(std::move(defaults)), config_(defaults_) {}

std::string Session::handle_line(std::string_view line) {
  nlohmann::json message;
  try {
    message = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    return error(std::string("malformed JSON: ") + e.what()).dump();
  }
  return handle(message).dump();
}

nlohmann::json Session::handle(const nlohmann::json& message) {
  if (!message.is_object() || !message.contains("type") || !message["type"].is_string()) {
    return error("message must be an object with a string \"type\"");
  }
  const auto type = message["type"].get<std::string>();
  try {
    if (type == "init") return init(message);
    if (!state_) return error("session not initialised; send init first");
    if (type == "step") return step(message);
    if (type == "set_params") return set_params(message);
    if (type == "reset") return reset(message);
    if (type == "snapshot") return state_message(true);
    return error("unknown message type '" + type + "'");
  } catch (const std::exception& e) {
    return error(e.what());
  }
}

void Session::start(RunConfig cfg) {
  std::optional<DirectedGraph> graph;
  if (!cfg.graph.empty()) {
    graph = read_edge_list(std::filesystem::path(cfg.graph)).graph;
  }
  auto params = cfg.resolved();
  params.record_events = false;
  auto state = init_simulation(params, std::move(graph));
  config_ = std::move(cfg);
  state_ = std::move(state);
  sent_edges_.clear();
}

nlohmann::json Session::init(const nlohmann::json& message) {
  RunConfig cfg = defaults_;
  if (message.contains("params")) {
    const auto settings = settings_from_json(message["params"], "init");
    if (settings.contains("graph")) return error("graph cannot be set by a client");
    apply_settings(cfg, settings);
  }
  cfg.resolved().validate();
  start(std::move(cfg));
  return state_message(true);
}

nlohmann::json Session::step(const nlohmann::json& message) {
  if (!message.contains("n") || !message["n"].is_number_integer()) {
    return error("step needs an integer \"n\"");
  }
  const auto n = message["n"].get<std::int64_t>();
  if (n < 0 || n > kMaxStepsPerRequest) {
    return error("step n must be in [0, " + std::to_string(kMaxStepsPerRequest) + "]");
  }
  for (std::int64_t k = 0; k < n; ++k) ecm::step(*state_);
  return state_message(false);
}

nlohmann::json Session::set_params(const nlohmann::json& message) {
  nlohmann::json body;
  if (message.contains("params")) {
    body = message["params"];
  } else {
    body = message;
    body.erase("type");
  }
  const auto settings = settings_from_json(body, "set_params");
  for (const auto& [key, value] : settings) {
    if (!is_live_param(key)) return error("'" + key + "' cannot change mid-run; send init");
  }
  RunConfig cfg = config_;
  apply_settings(cfg, settings);
  auto params = state_->params;
  params.epsilon = cfg.params.epsilon;
  params.mu = cfg.params.mu;
  params.p = cfg.params.p;
  params.q = cfg.params.q;
  params.l = cfg.params.l;
  params.strategy = cfg.params.strategy;
  params.recent_window = cfg.params.recent_window;
  params.t_max = cfg.params.t_max;
  params.validate();

  if (params.l != state_->params.l) resize_screens(*state_, params.l);
  if (params.recent_window != state_->params.recent_window) resize_recent(*state_, params.recent_window);
  state_->params = params;
  config_ = std::move(cfg);
  return state_message(false);
}

nlohmann::json Session::reset(const nlohmann::json& message) {
  RunConfig cfg = config_;
  if (message.contains("seed")) {
    if (!message["seed"].is_number_unsigned() && !message["seed"].is_number_integer()) {
      return error("reset seed must be an integer");
    }
    if (message["seed"].is_number_integer() && message["seed"].get<std::int64_t>() < 0) {
      return error("reset seed must be non-negative");
    }
    cfg.params.seed = message["seed"].get<std::uint64_t>();
  }
  start(std::move(cfg));
  return state_message(true);
}

nlohmann::json Session::state_message(bool full) {
  const auto edges = state_->graph.edges();
  nlohmann::json added, removed;
  if (full) {
    added = edge_list(edges);
    removed = nlohmann::json::array();
  } else {
    std::vector<Edge> plus, minus;
    std::set_difference(edges.begin(), edges.end(), sent_edges_.begin(), sent_edges_.end(),
                        std::back_inserter(plus));
    std::set_difference(sent_edges_.begin(), sent_edges_.end(), edges.begin(), edges.end(),
                        std::back_inserter(minus));
    added = edge_list(plus);
    removed = edge_list(minus);
  }
  sent_edges_ = std::set<Edge>(edges.begin(), edges.end());
  return {{"type", "state"},
          {"t", state_->t},
          {"opinions", state_->opinions},
          {"edges_added", std::move(added)},
          {"edges_removed", std::move(removed)},
          {"metrics", metrics_json(*state_)}};
}

SessionServer::SessionServer(RunConfig defaults, std::uint16_t port, const std::string& host)
    : defaults_(std::move(defaults)) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::system_error(errno, std::generic_category(), "socket");
  const int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw std::system_error(EINVAL, std::generic_category(), "bad listen address " + host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 ||
      ::listen(listen_fd_, 16) < 0) {
    const int err = errno;
    ::close(listen_fd_);
    throw std::system_error(err, std::generic_category(), "bind/listen on port " + std::to_string(port));
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

SessionServer::~SessionServer() {
  stop();
  {
    std::lock_guard lock(mutex_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  workers_.clear();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void SessionServer::stop() {
  stopping_ = true;
  std::lock_guard lock(mutex_);
  for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
}

void SessionServer::serve() {
  while (!stopping_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 100);
    if (ready <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    std::lock_guard lock(mutex_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    open_fds_.insert(fd);
    workers_.emplace_back([this, fd] { handle_connection(fd); });
  }
}

void SessionServer::handle_connection(int fd) {
  Session session(defaults_);
  std::string buffer;
  std::array<char, 65536> chunk{};
  auto send_all = [fd](const std::string& text) {
    std::size_t sent = 0;
    while (sent < text.size()) {
      const auto k = ::send(fd, text.data() + sent, text.size() - sent, MSG_NOSIGNAL);
      if (k <= 0) return false;
      sent += static_cast<std::size_t>(k);
    }
    return true;
  };
  bool open = true;
  while (open && !stopping_) {
    const auto got = ::recv(fd, chunk.data(), chunk.size(), 0);
    if (got <= 0) break;
    buffer.append(chunk.data(), static_cast<std::size_t>(got));
    std::size_t start = 0;
    for (auto nl = buffer.find('\n'); nl != std::string::npos; nl = buffer.find('\n', start)) {
      std::string_view line(buffer.data() + start, nl - start);
      start = nl + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
      if (!send_all(session.handle_line(line) + "\n")) {
        open = false;
        break;
      }
    }
    buffer.erase(0, start);
    if (buffer.size() > kMaxLineBytes) {
      send_all(error("message too long").dump() + "\n");
      break;
    }
  }
  std::lock_guard lock(mutex_);
  open_fds_.erase(fd);
  ::close(fd);
}

}  // namespace ecm
