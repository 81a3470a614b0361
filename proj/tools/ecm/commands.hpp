#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecm/config.hpp"

namespace ecm::cli {

/// Bad flags or configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string preset;
  std::string config_path;
  std::filesystem::path out_dir = "out";
  std::size_t jobs = 0;
  std::map<std::string, std::string> overrides;  // --<key> flags that were given
  std::vector<std::string> sets;                 // --set key=value
};

/// preset, then config file, then --set entries, then --<key> flags.
RunConfig resolve_config(const CommonOptions& opts, const std::string& default_preset = {});

struct RunOptions {
  bool until_t_max = false;
};

struct ValidateOptions {
  std::string edges;
  std::string labels;
  std::string hashtags;
};

struct MetricsOptions {
  std::string edges;
  std::string labels;
  std::string opinions;
  bool lscc = false;
  std::optional<std::size_t> k_core;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  unsigned port = 8765;
};

int cmd_run(const CommonOptions& opts, const RunOptions& run);
int cmd_sweep(const CommonOptions& opts);
int cmd_epsilon(const CommonOptions& opts);
int cmd_scaling(const CommonOptions& opts);
int cmd_strategies(const CommonOptions& opts);
int cmd_validate(const CommonOptions& opts, const ValidateOptions& v);
int cmd_metrics(const CommonOptions& opts, const MetricsOptions& m);
int cmd_serve(const CommonOptions& opts, const ServeOptions& s);

}  // namespace ecm::cli
