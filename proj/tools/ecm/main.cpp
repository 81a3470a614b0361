// ecm: command-line driver for the echo-chamber model.
//
// Every config key is also a flag of the same name (--epsilon 0.3,
// --mu_values 0.01,0.1). Precedence: preset < --config file < --set < flags.

#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <system_error>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ecm/config.hpp"
#include "ecm/error.hpp"

namespace {

using namespace ecm::cli;

struct KeyFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add_to(CLI::App& app) {
    for (const auto& key : ecm::config_keys()) {
      const std::string name(key.name);
      options[name] = app.add_option("--" + name, values[name], std::string(key.help))
                          ->group("Model and experiment keys");
    }
  }

  void collect(std::map<std::string, std::string>& out) const {
    for (const auto& [name, opt] : options) {
      if (opt->count() > 0) out[name] = values.at(name);
    }
  }
};

std::string preset_help() {
  std::string names;
  for (const auto& n : ecm::preset_names()) names += (names.empty() ? "" : ", ") + n;
  return "parameter preset: " + names;
}

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help,
                      CommonOptions& common, KeyFlags& flags, bool with_out = true) {
  auto* sub = app.add_subcommand(name, help);
  sub->add_option("--preset", common.preset, preset_help());
  sub->add_option("--config", common.config_path, "config file (key = value text or JSON)");
  sub->add_option("--set", common.sets, "key=value override, repeatable");
  if (with_out) sub->add_option("--out", common.out_dir, "output directory")->capture_default_str();
  sub->add_option("--jobs", common.jobs, "worker threads (0 = all cores)")->capture_default_str();
  flags.add_to(*sub);
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Echo-chamber opinion dynamics: simulation, experiments and validation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ecm 0.1.0");

  CommonOptions common;
  // Options belong to one subcommand each, so every subcommand gets its own
  // key flags; only one subcommand runs, so they share the other storage.
  KeyFlags run_flags, sweep_flags, eps_flags, scaling_flags, strat_flags, validate_flags, metrics_flags,
      serve_flags;
  RunOptions run_opts;
  ValidateOptions validate_opts;
  MetricsOptions metrics_opts;
  ServeOptions serve_opts;

  auto* run = add_command(app, "run", "simulate one run and write its metric series", common, run_flags);
  run->add_flag("--until-t-max", run_opts.until_t_max, "ignore the echo-chamber stop and run to t_max");

  auto* sweep = add_command(app, "sweep", "time to echo chamber over a (mu, q) grid", common, sweep_flags);
  auto* epsilon = add_command(app, "epsilon", "opinion peaks and spread against epsilon", common, eps_flags);
  auto* scaling = add_command(app, "scaling", "time to echo chamber against N at fixed density", common,
                              scaling_flags);
  auto* strategies = add_command(app, "strategies", "compare rewiring strategies with matched seeds",
                                 common, strat_flags);
  auto* validate = add_command(app, "validate", "calibrated run against an empirical retweet network",
                               common, validate_flags);
  validate->add_option("--edges", validate_opts.edges, "retweet edge list")->required();
  validate->add_option("--labels", validate_opts.labels, "node labels file")->required();
  validate->add_option("--hashtags", validate_opts.hashtags, "user hashtag adoption file");

  auto* metrics = add_command(app, "metrics", "structural metrics of an edge list", common, metrics_flags,
                              false);
  metrics->add_option("--edges", metrics_opts.edges, "edge list")->required();
  metrics->add_option("--labels", metrics_opts.labels, "two-label partition for the segregation index");
  metrics->add_option("--opinions", metrics_opts.opinions, "node,opinion CSV");
  metrics->add_flag("--lscc", metrics_opts.lscc, "restrict to the largest strongly connected component");
  metrics->add_option("--k-core", metrics_opts.k_core, "restrict to the k-core first");

  auto* serve = add_command(app, "serve", "interactive session server (newline-delimited JSON over TCP)",
                            common, serve_flags, false);
  serve->add_option("--host", serve_opts.host, "listen address")->capture_default_str();
  serve->add_option("--port", serve_opts.port, "listen port (0 picks one)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      run_flags.collect(common.overrides);
      return cmd_run(common, run_opts);
    }
    if (sweep->parsed()) {
      sweep_flags.collect(common.overrides);
      return cmd_sweep(common);
    }
    if (epsilon->parsed()) {
      eps_flags.collect(common.overrides);
      return cmd_epsilon(common);
    }
    if (scaling->parsed()) {
      scaling_flags.collect(common.overrides);
      return cmd_scaling(common);
    }
    if (strategies->parsed()) {
      strat_flags.collect(common.overrides);
      return cmd_strategies(common);
    }
    if (validate->parsed()) {
      validate_flags.collect(common.overrides);
      return cmd_validate(common, validate_opts);
    }
    if (metrics->parsed()) {
      metrics_flags.collect(common.overrides);
      return cmd_metrics(common, metrics_opts);
    }
    if (serve->parsed()) {
      serve_flags.collect(common.overrides);
      return cmd_serve(common, serve_opts);
    }
  } catch (const UsageError& e) {
    std::cerr << "ecm: " << e.what() << "\n";
    return 2;
  } catch (const ecm::ParameterError& e) {
    std::cerr << "ecm: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ecm: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
