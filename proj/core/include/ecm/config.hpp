#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecm/empirical.hpp"
#include "ecm/metrics.hpp"
#include "ecm/sim.hpp"

namespace ecm {

/// Model parameters plus the experiment knobs every subcommand reads. All
/// fields are reachable through a flat key namespace (see config_keys()).
struct RunConfig {
  Params params;
  std::optional<double> density;  // when set, e = round(density n (n - 1))
  std::string graph;              // optional initial follower graph (edge list)
  PeakSettings peaks;
  ValidationOptions validation;
  std::size_t hashtag_d = 20;
  std::uint64_t snapshot_every = 0;  // steps between metric snapshots; 0 means N
  std::size_t runs = 20;
  std::vector<double> epsilon_values{0.2, 0.3, 0.4, 0.6, 0.8, 1.0};
  std::vector<double> mu_values;
  std::vector<double> q_values;
  std::vector<std::size_t> n_values{50, 100, 200, 400};

  /// Params with e derived from density when one is set.
  Params resolved() const;
};

struct ConfigKey {
  std::string_view name;
  std::string_view help;
};

const std::vector<ConfigKey>& config_keys();

/// Sets one key from its text form. Lists are comma separated. Throws
/// ParameterError for unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Flat "key = value" text ('#' comments, optional quotes) or a flat JSON
/// object; the format is picked from the first non-blank character. Throws
/// FormatError with the line of a malformed entry.
std::map<std::string, std::string> parse_config(std::string_view text, const std::string& source);
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);
/// Settings from a flat JSON object; arrays become comma-separated lists.
std::map<std::string, std::string> settings_from_json(const nlohmann::json& object,
                                                      const std::string& source);

void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& settings);

const std::vector<std::string>& preset_names();
/// Throws ParameterError for an unknown name.
RunConfig preset(std::string_view name);

/// Every key with its current value, in config_keys() order; parse_config of
/// the rendered text reproduces the configuration.
std::string render_config(const RunConfig& cfg);

}  // namespace ecm
