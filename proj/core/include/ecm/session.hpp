#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>

#include <nlohmann/json.hpp>

#include "ecm/config.hpp"
#include "ecm/graph.hpp"
#include "ecm/sim.hpp"

namespace ecm {

/// One interactive simulation driven by newline-delimited JSON commands:
///
///   {"type":"init","params":{...}}     full state
///   {"type":"step","n":int}            state with edge deltas
///   {"type":"set_params","params":{...}}  (keys may also sit at top level)
///   {"type":"reset","seed":int}        full state, same params, new seed
///   {"type":"snapshot"}                full state
///
/// Every command gets exactly one reply, either
///   {"type":"state","t","opinions","edges_added","edges_removed","metrics"}
/// or {"type":"error","msg"}. A full state lists every edge in edges_added
/// and nothing in edges_removed; otherwise the two lists are the net change
/// since the previous state reply. Errors leave the session unchanged.
class Session {
 public:
  explicit Session(RunConfig defaults = {});

  nlohmann::json handle(const nlohmann::json& message);
  /// Parses one line; malformed JSON yields an error reply.
  std::string handle_line(std::string_view line);

  bool initialized() const noexcept { return state_.has_value(); }
  const SimState* state() const noexcept { return state_ ? &*state_ : nullptr; }

 private:
  nlohmann::json init(const nlohmann::json& message);
  nlohmann::json step(const nlohmann::json& message);
  nlohmann::json set_params(const nlohmann::json& message);
  nlohmann::json reset(const nlohmann::json& message);
  nlohmann::json state_message(bool full);
  void start(RunConfig cfg);

  RunConfig defaults_;
  RunConfig config_;
  std::optional<SimState> state_;
  std::set<Edge> sent_edges_;  // edge set as last reported to the client
};

/// Keys set_params accepts; structural keys (n, e, graph, ...) need init.
bool is_live_param(std::string_view key);

/// Plain TCP server giving every connection its own Session.
class SessionServer {
 public:
  /// Binds and listens immediately; port 0 picks a free port. Throws
  /// std::system_error on socket failures.
  SessionServer(RunConfig defaults, std::uint16_t port, const std::string& host = "127.0.0.1");
  ~SessionServer();
  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  /// Accepts connections until stop() is called.
  void serve();
  /// Safe from any thread; closes open connections.
  void stop();

 private:
  void handle_connection(int fd);

  RunConfig defaults_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex mutex_;
  std::set<int> open_fds_;
  std::list<std::jthread> workers_;
};

}  // namespace ecm
