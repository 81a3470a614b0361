#include "ecm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ecm/error.hpp"
#include "ecm/graph.hpp"
#include "ecm/harness.hpp"

namespace ecm {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw ParameterError(std::string(key) + ": expected " + std::string(want) + ", got '" +
                       std::string(value) + "'");
}

double parse_double(std::string_view key, std::string_view text) {
  const auto s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    bad_value(key, text, "a number");
  }
  return v;
}

// Integers also accept exact scientific forms such as 1e5.
std::uint64_t parse_uint(std::string_view key, std::string_view text) {
  const auto s = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc{} && ptr == s.data() + s.size()) return v;
  double d = 0.0;
  const auto [dptr, dec] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (dec == std::errc{} && dptr == s.data() + s.size() && d >= 0.0 && d < 1.8e19 &&
      d == std::floor(d)) {
    return static_cast<std::uint64_t>(d);
  }
  bad_value(key, text, "a non-negative integer");
}

bool parse_bool(std::string_view key, std::string_view text) {
  const auto s = trim(text);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  bad_value(key, text, "true or false");
}

template <class T, class F>
std::vector<T> parse_list(std::string_view text, F&& item) {
  std::vector<T> out;
  auto rest = trim(text);
  if (!rest.empty() && rest.front() == '[' && rest.back() == ']') rest = rest.substr(1, rest.size() - 2);
  if (trim(rest).empty()) return out;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(item(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <class T>
std::string format_list(const std::vector<T>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(values[k]);
    } else {
      out += std::to_string(values[k]);
    }
  }
  return out;
}

struct KeyDef {
  ConfigKey key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
  bool quoted = false;
};

const std::vector<KeyDef>& key_defs() {
  static const std::vector<KeyDef> defs = [] {
    std::vector<KeyDef> d;
    auto add_u = [&](std::string_view name, std::string_view help, auto member) {
      d.push_back({{name, help},
                   [=](RunConfig& c, std::string_view v) {
                     member(c) = static_cast<std::remove_reference_t<decltype(member(c))>>(
                         parse_uint(name, v));
                   },
                   [=](const RunConfig& c) { return std::to_string(member(c)); }});
    };
    auto add_d = [&](std::string_view name, std::string_view help, auto member) {
      d.push_back({{name, help},
                   [=](RunConfig& c, std::string_view v) { member(c) = parse_double(name, v); },
                   [=](const RunConfig& c) { return format_double(member(c)); }});
    };
    add_u("n", "number of users N", [](auto& c) -> auto& { return c.params.n; });
    add_u("e", "number of follow edges E", [](auto& c) -> auto& { return c.params.e; });
    d.push_back({{"density", "follower-graph density; overrides e when set (empty to unset)"},
                 [](RunConfig& c, std::string_view v) {
                   if (trim(v).empty() || trim(v) == "none") {
                     c.density.reset();
                   } else {
                     c.density = parse_double("density", v);
                   }
                 },
                 [](const RunConfig& c) { return c.density ? format_double(*c.density) : std::string(); },
                 true});
    add_d("epsilon", "confidence bound", [](auto& c) -> auto& { return c.params.epsilon; });
    add_d("mu", "influence strength", [](auto& c) -> auto& { return c.params.mu; });
    add_d("p", "repost probability", [](auto& c) -> auto& { return c.params.p; });
    add_d("q", "unfollow probability", [](auto& c) -> auto& { return c.params.q; });
    add_u("l", "screen length", [](auto& c) -> auto& { return c.params.l; });
    d.push_back({{"strategy", "rewiring strategy: random, repost or recommendation"},
                 [](RunConfig& c, std::string_view v) { c.params.strategy = parse_strategy(trim(v)); },
                 [](const RunConfig& c) { return std::string(to_string(c.params.strategy)); },
                 true});
    add_u("t_max", "step budget", [](auto& c) -> auto& { return c.params.t_max; });
    add_u("seed", "RNG seed (master seed for experiments)", [](auto& c) -> auto& { return c.params.seed; });
    add_u("recent_window", "recommendation pool size", [](auto& c) -> auto& { return c.params.recent_window; });
    d.push_back({{"record_events", "keep the event log"},
                 [](RunConfig& c, std::string_view v) { c.params.record_events = parse_bool("record_events", v); },
                 [](const RunConfig& c) { return std::string(c.params.record_events ? "true" : "false"); }});
    d.push_back({{"graph", "initial follower graph edge list (overrides n and e)"},
                 [](RunConfig& c, std::string_view v) { c.graph = std::string(trim(v)); },
                 [](const RunConfig& c) { return c.graph; },
                 true});
    add_u("peak_bins", "histogram bins for peak detection", [](auto& c) -> auto& { return c.peaks.bins; });
    add_d("peak_min_height", "minimum peak height as a fraction of all values",
          [](auto& c) -> auto& { return c.peaks.min_height_fraction; });
    add_u("snapshot_every", "steps between metric snapshots in run (0 = one epoch)",
          [](auto& c) -> auto& { return c.snapshot_every; });
    add_u("runs", "runs per cell / value / strategy", [](auto& c) -> auto& { return c.runs; });
    d.push_back({{"epsilon_values", "epsilon sweep values"},
                 [](RunConfig& c, std::string_view v) {
                   c.epsilon_values = parse_list<double>(v, [](std::string_view s) { return parse_double("epsilon_values", s); });
                 },
                 [](const RunConfig& c) { return format_list(c.epsilon_values); },
                 true});
    d.push_back({{"mu_values", "mu axis of the (mu, q) sweep"},
                 [](RunConfig& c, std::string_view v) {
                   c.mu_values = parse_list<double>(v, [](std::string_view s) { return parse_double("mu_values", s); });
                 },
                 [](const RunConfig& c) { return format_list(c.mu_values); },
                 true});
    d.push_back({{"q_values", "q axis of the (mu, q) sweep"},
                 [](RunConfig& c, std::string_view v) {
                   c.q_values = parse_list<double>(v, [](std::string_view s) { return parse_double("q_values", s); });
                 },
                 [](const RunConfig& c) { return format_list(c.q_values); },
                 true});
    d.push_back({{"n_values", "network sizes for the scaling experiment"},
                 [](RunConfig& c, std::string_view v) {
                   c.n_values = parse_list<std::size_t>(v, [](std::string_view s) {
                     return static_cast<std::size_t>(parse_uint("n_values", s));
                   });
                 },
                 [](const RunConfig& c) { return format_list(c.n_values); },
                 true});
    add_u("epoch_budget", "validation epoch budget", [](auto& c) -> auto& { return c.validation.epoch_budget; });
    add_u("snapshot_epochs", "validation snapshot spacing in epochs",
          [](auto& c) -> auto& { return c.validation.snapshot_every; });
    add_u("distance_bins", "bins of the d_o and d_t histograms",
          [](auto& c) -> auto& { return c.validation.distance_bins; });
    add_d("distance_peak_min_height", "peak threshold for distance histograms",
          [](auto& c) -> auto& { return c.validation.min_peak_fraction; });
    add_u("hashtag_d", "number of hashtags D", [](auto& c) -> auto& { return c.hashtag_d; });
    return d;
  }();
  return defs;
}

const KeyDef& find_key(std::string_view key) {
  for (const auto& def : key_defs()) {
    if (def.key.name == key) return def;
  }
  throw ParameterError("unknown config key '" + std::string(key) + "'");
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

std::string json_scalar(const nlohmann::json& v, const std::string& source, std::string_view key) {
  switch (v.type()) {
    case nlohmann::json::value_t::string: return v.get<std::string>();
    case nlohmann::json::value_t::boolean: return v.get<bool>() ? "true" : "false";
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned: return v.dump();
    case nlohmann::json::value_t::number_float: return format_double(v.get<double>());
    case nlohmann::json::value_t::null: return {};
    default:
      throw FormatError(source, 0, "value of '" + std::string(key) + "' must be a scalar or a list");
  }
}

std::map<std::string, std::string> parse_json_config(std::string_view text, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(source, line_of(text, e.byte == 0 ? 0 : e.byte - 1), "invalid JSON");
  }
  if (!doc.is_object()) throw FormatError(source, 1, "config must be a JSON object");
  return settings_from_json(doc, source);
}

}  // namespace

std::map<std::string, std::string> settings_from_json(const nlohmann::json& object,
                                                      const std::string& source) {
  if (!object.is_object()) throw FormatError(source, 0, "expected a JSON object of settings");
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : object.items()) {
    if (value.is_array()) {
      std::string joined;
      for (std::size_t k = 0; k < value.size(); ++k) {
        if (k) joined += ',';
        joined += json_scalar(value[k], source, key);
      }
      out[key] = joined;
    } else {
      out[key] = json_scalar(value, source, key);
    }
  }
  return out;
}

namespace {

std::map<std::string, std::string> parse_text_config(std::string_view text, const std::string& source) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    // A '#' outside quotes starts a comment.
    bool in_quotes = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (line[k] == '"') in_quotes = !in_quotes;
      if (line[k] == '#' && !in_quotes) {
        line = line.substr(0, k);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw FormatError(source, line_no, "expected key = value");
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw FormatError(source, line_no, "empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    out[std::string(key)] = std::string(value);
  }
  return out;
}

}  // namespace

Params RunConfig::resolved() const {
  Params out = params;
  if (density) out.e = edges_for_density(out.n, *density);
  return out;
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    for (const auto& def : key_defs()) k.push_back(def.key);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  find_key(key).set(cfg, value);
}

void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& settings) {
  for (const auto& [key, value] : settings) apply_setting(cfg, key, value);
}

std::map<std::string, std::string> parse_config(std::string_view text, const std::string& source) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json_config(text, source);
  return parse_text_config(text, source);
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig3",  "fig4",  "fig6a",       "fig6b",
                                              "fig7a", "fig7b", "conover2011", "snap-follower"};
  return names;
}

RunConfig preset(std::string_view name) {
  // Base block shared by the small-network figures: N=100, E=400, eps=0.4,
  // mu=0.5, p=0.5, q=0.5, l=10, random rewiring, t_max=1e5.
  RunConfig cfg;
  if (name == "fig3" || name == "fig7a") return cfg;
  if (name == "fig4") {
    cfg.epsilon_values = {0.2, 0.3, 0.4, 0.6, 0.8, 1.0};
    return cfg;
  }
  if (name == "fig6a") {
    cfg.mu_values = log_grid(1e-3, 1.0, 10);
    cfg.q_values = cfg.mu_values;
    return cfg;
  }
  if (name == "fig6b") {
    cfg.density = 400.0 / (100.0 * 99.0);
    cfg.n_values = {50, 100, 200, 400};
    cfg.runs = 10;
    cfg.params.t_max = 1'000'000;
    return cfg;
  }
  if (name == "fig7b") {
    cfg.params.n = 10'000;
    cfg.params.e = 100'000;
    cfg.params.t_max = 1'000'000;
    cfg.runs = 3;
    return cfg;
  }
  if (name == "conover2011") {
    cfg.params.p = 0.25;
    cfg.params.l = 10;
    cfg.params.mu = 0.015;
    cfg.params.epsilon = 0.65;
    cfg.params.q = 0.25;
    cfg.params.strategy = RewireStrategy::random;
    cfg.density = 1.8e-4;
    cfg.params.record_events = false;
    return cfg;
  }
  if (name == "snap-follower") {
    cfg.params.t_max = 1'000'000;
    cfg.params.record_events = false;
    cfg.snapshot_every = 100'000;
    return cfg;
  }
  throw ParameterError("unknown preset '" + std::string(name) + "'");
}

std::string render_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& def : key_defs()) {
    out += def.key.name;
    out += " = ";
    const auto value = def.get(cfg);
    if (def.quoted) {
      out += '"' + value + '"';
    } else {
      out += value;
    }
    out += '\n';
  }
  return out;
}

}  // namespace ecm
