#include "commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ecm/empirical.hpp"
#include "ecm/error.hpp"
#include "ecm/graph.hpp"
#include "ecm/graph_io.hpp"
#include "ecm/harness.hpp"
#include "ecm/metrics.hpp"
#include "ecm/report.hpp"
#include "ecm/session.hpp"
#include "ecm/sim.hpp"
#include "ecm/stats.hpp"

namespace ecm::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::filesystem::path prepare_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

template <class Writer>
void write_csv(const std::filesystem::path& path, Writer&& writer) {
  std::ostringstream out;
  writer(out);
  write_text_file(path, out.str());
}

nlohmann::json config_json(const RunConfig& cfg) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, value] : parse_config(render_config(cfg), "config")) out[key] = value;
  return out;
}

std::string default_preset(std::string_view command) {
  static const std::map<std::string_view, std::string> defaults{
      {"run", "fig3"},    {"sweep", "fig6a"},       {"epsilon", "fig4"},
      {"scaling", "fig6b"}, {"strategies", "fig7a"}, {"validate", "conover2011"}};
  const auto it = defaults.find(command);
  return it == defaults.end() ? std::string() : it->second;
}

void write_manifest(const std::filesystem::path& dir, std::string_view command,
                    const CommonOptions& opts, const RunConfig& cfg, Clock::time_point start,
                    nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json m = {
      {"command", command},
      {"preset", opts.preset.empty() ? default_preset(command) : opts.preset},
      {"spec", config_json(cfg)},
      {"master_seed", cfg.params.seed},
      {"commit", build_commit()},
      {"jobs", opts.jobs},
      {"wall_time_s", std::chrono::duration<double>(Clock::now() - start).count()},
  };
  for (auto& [k, v] : extra.items()) m[k] = v;
  write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

void write_svg(const std::filesystem::path& path, const std::string& svg) { write_text_file(path, svg); }

std::size_t weak_component_count(const DirectedGraph& g) {
  return static_cast<std::size_t>(weakly_connected_components(g).cluster_count);
}

std::vector<double> read_opinions(const std::filesystem::path& path, const NodeIndex& index) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<double> opinions(index.size(), std::nan(""));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || (line_no == 1 && line.rfind("node", 0) == 0)) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw FormatError(path.string(), line_no, "expected node,opinion");
    const auto id = index.find(line.substr(0, comma));
    if (!id) continue;
    try {
      opinions[*id] = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw FormatError(path.string(), line_no, "opinion is not a number");
    }
  }
  for (std::size_t v = 0; v < opinions.size(); ++v) {
    if (std::isnan(opinions[v])) throw DataError(path.string() + ": no opinion for node " + index.name(static_cast<NodeId>(v)));
  }
  return opinions;
}

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

}  // namespace

RunConfig resolve_config(const CommonOptions& opts, const std::string& default_preset) {
  try {
    const auto name = opts.preset.empty() ? default_preset : opts.preset;
    RunConfig cfg = name.empty() ? RunConfig{} : preset(name);
    if (!opts.config_path.empty()) apply_settings(cfg, read_config_file(opts.config_path));
    for (const auto& kv : opts.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [key, value] : opts.overrides) apply_setting(cfg, key, value);
    return cfg;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

int cmd_run(const CommonOptions& opts, const RunOptions& run) {
  const auto start = Clock::now();
  auto cfg = resolve_config(opts, "fig3");
  std::optional<NamedGraph> named;
  if (!cfg.graph.empty()) named = read_edge_list(std::filesystem::path(cfg.graph));
  auto params = cfg.resolved();
  if (named) {
    params.n = named->graph.node_count();
    params.e = named->graph.edge_count();
  }
  try {
    params.validate();
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  const auto dir = prepare_out_dir(opts.out_dir);

  auto state = init_simulation(params, named ? std::optional(named->graph) : std::nullopt);
  const auto n = state.node_count();
  const std::uint64_t every = cfg.snapshot_every > 0 ? cfg.snapshot_every : std::max<std::uint64_t>(1, n);
  std::vector<MetricsSnapshot> snapshots;
  const auto outcome = run_until(
      state,
      [&](const SimState& s) {
        snapshots.push_back(take_snapshot(s));
        return !run.until_t_max && is_echo_chamber(s);
      },
      every);
  if (snapshots.empty() || snapshots.back().t != state.t) snapshots.push_back(take_snapshot(state));

  const auto* names = named ? &named->index.names() : nullptr;
  write_csv(dir / "snapshots.csv", [&](std::ostream& o) { write_snapshots_csv(o, snapshots); });
  write_csv(dir / "opinions.csv", [&](std::ostream& o) { write_opinions_csv(o, state.opinions, names); });
  write_csv(dir / "edges.txt", [&](std::ostream& o) { write_edge_list(o, state.graph, names); });
  if (names) write_csv(dir / "nodes.csv", [&](std::ostream& o) { write_node_map(o, *names); });
  if (params.record_events) {
    write_csv(dir / "events.csv", [&](std::ostream& o) { write_events_csv(o, state.event_log); });
  }

  std::vector<PlotSeries> series(3);
  series[0].name = "segregation";
  series[1].name = "entropy";
  series[2].name = "triad fraction";
  for (const auto& s : snapshots) {
    for (auto& sr : series) sr.x.push_back(static_cast<double>(s.t));
    series[0].y.push_back(s.segregation);
    series[1].y.push_back(s.mean_screen_entropy);
    series[2].y.push_back(s.triad_fraction);
  }
  write_svg(dir / "metrics.svg", svg_line_plot({"Run metrics", "t", "value"}, series));

  const bool chamber = is_echo_chamber(state);
  const auto components = weak_component_count(state.graph);
  const auto peaks = count_opinion_peaks(state.opinions, cfg.peaks);
  write_manifest(dir, "run", opts, cfg, start,
                 {{"t", state.t},
                  {"echo_chamber", chamber},
                  {"stopped_early", outcome.converged},
                  {"weak_components", components},
                  {"peaks", peaks}});
  std::cout << "t=" << state.t << " echo_chamber=" << (chamber ? "yes" : "no")
            << " components=" << components << " peaks=" << peaks << " out=" << dir.string() << "\n";
  return 0;
}

int cmd_sweep(const CommonOptions& opts) {
  const auto start = Clock::now();
  auto cfg = resolve_config(opts, "fig6a");
  const auto dir = prepare_out_dir(opts.out_dir);
  SweepSpec spec;
  spec.mu_values = cfg.mu_values.empty() ? log_grid(1e-3, 1.0, 10) : cfg.mu_values;
  spec.q_values = cfg.q_values.empty() ? log_grid(1e-3, 1.0, 10) : cfg.q_values;
  spec.runs_per_cell = cfg.runs;
  spec.base = cfg.resolved();
  spec.master_seed = cfg.params.seed;
  SweepResult result;
  try {
    result = sweep_mu_q(spec, opts.jobs);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  write_csv(dir / "sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, result); });
  write_csv(dir / "sweep_runs.csv", [&](std::ostream& o) { write_sweep_runs_csv(o, result); });
  std::vector<double> values;
  for (const auto& c : result.cells) values.push_back(c.mean_time_with_censored);
  write_svg(dir / "sweep_heatmap.svg",
            svg_heatmap({"Mean time to echo chamber (censored at t_max)", "mu", "q", false, true},
                        spec.mu_values, spec.q_values, values));
  write_manifest(dir, "sweep", opts, cfg, start, {{"cells", result.cells.size()}});
  std::cout << "cells=" << result.cells.size() << " runs_per_cell=" << spec.runs_per_cell
            << " out=" << dir.string() << "\n";
  return 0;
}

int cmd_epsilon(const CommonOptions& opts) {
  const auto start = Clock::now();
  auto cfg = resolve_config(opts, "fig4");
  const auto dir = prepare_out_dir(opts.out_dir);
  std::vector<EpsilonRow> rows;
  try {
    rows = sweep_epsilon(cfg.epsilon_values, cfg.runs, cfg.resolved(), cfg.params.seed, cfg.peaks, opts.jobs);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  write_csv(dir / "epsilon.csv", [&](std::ostream& o) { write_epsilon_csv(o, rows); });
  PlotSeries peaks{"peaks", {}, {}, {}};
  PlotSeries dist{"max distance", {}, {}, {}};
  for (const auto& r : rows) {
    peaks.x.push_back(r.epsilon);
    peaks.y.push_back(r.mean_peaks);
    peaks.err.push_back(r.sd_peaks);
    dist.x.push_back(r.epsilon);
    dist.y.push_back(r.mean_max_distance);
    dist.err.push_back(r.sd_max_distance);
  }
  write_svg(dir / "epsilon_peaks.svg", svg_line_plot({"Opinion peaks", "epsilon", "peaks"}, std::span(&peaks, 1)));
  write_svg(dir / "epsilon_distance.svg",
            svg_line_plot({"Maximum opinion distance", "epsilon", "distance"}, std::span(&dist, 1)));
  write_manifest(dir, "epsilon", opts, cfg, start);
  for (const auto& r : rows) {
    std::cout << "epsilon=" << format_number(r.epsilon) << " peaks=" << format_number(r.mean_peaks)
              << " max_distance=" << format_number(r.mean_max_distance) << "\n";
  }
  return 0;
}

int cmd_scaling(const CommonOptions& opts) {
  const auto start = Clock::now();
  auto cfg = resolve_config(opts, "fig6b");
  const auto dir = prepare_out_dir(opts.out_dir);
  if (std::set<std::size_t>(cfg.n_values.begin(), cfg.n_values.end()).size() < 2) {
    throw UsageError("scaling needs at least two distinct n_values for a linear fit");
  }
  const auto base = cfg.resolved();
  const double density =
      cfg.density.value_or(static_cast<double>(base.e) / (static_cast<double>(base.n) * static_cast<double>(base.n - 1)));
  ScalingResult result;
  try {
    result = scaling_in_n(cfg.n_values, cfg.runs, base, density, cfg.params.seed, opts.jobs);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  write_csv(dir / "scaling.csv", [&](std::ostream& o) { write_scaling_csv(o, result); });
  PlotSeries pts{"mean time", {}, {}, {}};
  for (const auto& r : result.rows) {
    pts.x.push_back(static_cast<double>(r.n));
    pts.y.push_back(r.mean_time);
    pts.err.push_back(r.sd_time);
  }
  write_svg(dir / "scaling.svg", svg_line_plot({"Time to echo chamber", "N", "steps"}, std::span(&pts, 1)));
  nlohmann::json fit;
  if (result.fit) {
    fit = {{"slope", result.fit->slope}, {"intercept", result.fit->intercept}, {"r_squared", result.fit->r_squared}};
  }
  write_manifest(dir, "scaling", opts, cfg, start, {{"density", density}, {"fit", fit}});
  if (result.fit) {
    std::cout << "slope=" << format_number(result.fit->slope)
              << " r_squared=" << format_number(result.fit->r_squared) << " out=" << dir.string() << "\n";
  } else {
    std::cerr << "warning: fewer than two sizes produced converged runs; no fit reported\n";
  }
  return 0;
}

int cmd_strategies(const CommonOptions& opts) {
  const auto start = Clock::now();
  auto cfg = resolve_config(opts, "fig7a");
  const auto dir = prepare_out_dir(opts.out_dir);
  StrategyComparison cmp;
  try {
    cmp = compare_strategies(cfg.runs, cfg.resolved(), cfg.params.seed, cfg.peaks, opts.jobs);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  write_csv(dir / "strategy_runs.csv", [&](std::ostream& o) { write_strategy_runs_csv(o, cmp); });
  write_csv(dir / "strategy_summary.csv", [&](std::ostream& o) { write_strategy_summary_csv(o, cmp); });
  write_csv(dir / "ccdf.csv", [&](std::ostream& o) { write_ccdf_csv(o, cmp); });
  std::vector<PlotSeries> series;
  for (const auto& st : cmp.stats) {
    PlotSeries s{std::string(to_string(st.strategy)), {}, {}, {}};
    for (const auto& pt : st.ccdf) {
      if (pt.degree == 0) continue;
      s.x.push_back(static_cast<double>(pt.degree));
      s.y.push_back(pt.fraction);
    }
    series.push_back(std::move(s));
  }
  write_svg(dir / "ccdf.svg", svg_line_plot({"In-degree CCDF", "in-degree", "P(k >= x)", true, true}, series));
  write_manifest(dir, "strategies", opts, cfg, start,
                 {{"repost_vs_random_p", cmp.repost_vs_random.p_value},
                  {"recommendation_vs_random_p", cmp.recommendation_vs_random.p_value}});
  for (const auto& st : cmp.stats) {
    std::cout << to_string(st.strategy) << ": closed_triads=" << format_number(mean(st.closed_triads))
              << " time=" << format_number(mean(st.times)) << " peaks=" << format_number(mean(st.peaks))
              << " max_in_degree=" << format_number(mean(st.max_in_degree)) << "\n";
  }
  std::cout << "repost vs random closed triads: p=" << format_number(cmp.repost_vs_random.p_value) << "\n";
  return 0;
}

int cmd_validate(const CommonOptions& opts, const ValidateOptions& v) {
  const auto start = Clock::now();
  auto cfg = resolve_config(opts, "conover2011");
  const auto dir = prepare_out_dir(opts.out_dir);
  const auto net = load_labeled_network(std::filesystem::path(v.edges), std::filesystem::path(v.labels));
  std::optional<HashtagData> tags;
  if (!v.hashtags.empty()) tags = hashtag_vectors(std::filesystem::path(v.hashtags), cfg.hashtag_d);

  cfg.params.n = net.graph.node_count();
  auto params = cfg.resolved();
  try {
    params.validate();
  } catch (const ParameterError& e) {
    throw UsageError(std::string(e.what()) + " (empirical network has " +
                     std::to_string(net.graph.node_count()) + " nodes)");
  }
  const auto report = validation_run(params, net, tags ? &*tags : nullptr, cfg.validation);
  write_validation_report(dir, report);

  PlotSeries seg{"segregation", {}, {}, {}};
  PlotSeries target{"empirical", {}, {}, {}};
  for (const auto& s : report.series) {
    seg.x.push_back(static_cast<double>(s.epoch));
    seg.y.push_back(s.segregation);
    target.x.push_back(static_cast<double>(s.epoch));
    target.y.push_back(report.empirical_segregation);
  }
  const std::vector<PlotSeries> series{seg, target};
  write_svg(dir / "segregation.svg", svg_line_plot({"Retweet-network segregation", "epoch", "s"}, series));
  write_manifest(dir, "validate", opts, cfg, start,
                 {{"empirical_nodes", net.graph.node_count()},
                  {"empirical_edges", net.graph.edge_count()},
                  {"hashtag_coverage", report.hashtag_coverage}});

  std::cout << "empirical: nodes=" << net.graph.node_count() << " edges=" << net.graph.edge_count()
            << " s_emp=" << format_number(report.empirical_segregation) << "\n";
  if (tags) std::cout << "hashtag coverage=" << format_number(tags->coverage()) << "\n";
  const double s_sim = report.series.empty() ? std::nan("") : report.series.back().segregation;
  std::cout << "stop_epoch=" << report.stop_epoch << " s_sim=" << format_number(s_sim)
            << " do_peaks=" << report.do_peaks << (report.censored ? " (censored)" : "")
            << " out=" << dir.string() << "\n";
  return 0;
}

int cmd_metrics(const CommonOptions& opts, const MetricsOptions& m) {
  auto cfg = resolve_config(opts);
  auto named = read_edge_list(std::filesystem::path(m.edges));
  DirectedGraph g = named.graph;
  std::vector<NodeId> kept(g.node_count());
  for (NodeId v = 0; v < kept.size(); ++v) kept[v] = v;
  auto restrict_to = [&](const Subgraph& sub) {
    std::vector<NodeId> next;
    for (auto v : sub.nodes) next.push_back(kept[v]);
    kept = std::move(next);
    g = sub.graph;
  };
  if (m.k_core) restrict_to(k_core(g, *m.k_core));
  if (m.lscc) restrict_to(largest_strongly_connected_component(g));

  const auto census = triad_census(g);
  nlohmann::json out = {
      {"nodes", g.node_count()},
      {"edges", g.edge_count()},
      {"density", g.node_count() > 1 ? nlohmann::json(g.density()) : nlohmann::json()},
      {"weak_components", weak_component_count(g)},
      {"strong_components", strongly_connected_components(g).cluster_count},
      {"closed_triads", census.closed},
      {"open_triads", census.open},
      {"triad_fraction", census.closed_fraction()},
  };
  std::size_t max_in = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) max_in = std::max(max_in, g.in_degree(v));
  out["max_in_degree"] = max_in;

  if (!m.labels.empty()) {
    std::ifstream labels_in(m.labels);
    if (!labels_in) throw DataError("cannot open " + m.labels);
    // Labels are matched by external name on the restricted graph.
    std::map<std::string, std::string> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(labels_in, line)) {
      ++line_no;
      const auto fields = split_fields(line);
      if (fields.empty() || fields[0].front() == '#') continue;
      if (fields.size() < 2) throw FormatError(m.labels, line_no, "expected: node_id label");
      labels[std::string(fields[0])] = std::string(fields[1]);
    }
    std::map<std::string, int> label_ids;
    for (const auto& [node, label] : labels) label_ids.emplace(label, 0);
    int next = 0;
    for (auto& [label, id] : label_ids) id = next++;
    if (label_ids.size() != 2) throw DataError(m.labels + ": segregation needs exactly two labels");
    Partition part{std::vector<int>(g.node_count()), 2};
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const auto& name = named.index.name(kept[v]);
      const auto it = labels.find(name);
      if (it == labels.end()) throw DataError(m.labels + ": no label for node " + name);
      part.label[v] = label_ids[it->second];
    }
    out["segregation"] = segregation_index(g, part);
  }
  if (!m.opinions.empty()) {
    const auto all = read_opinions(m.opinions, named.index);
    std::vector<double> opinions;
    for (auto v : kept) opinions.push_back(all[v]);
    out["peaks"] = count_opinion_peaks(opinions, cfg.peaks);
    out["max_opinion_distance"] = opinions.empty() ? nlohmann::json() : nlohmann::json(max_opinion_distance(opinions));
    out["echo_chamber"] = is_echo_chamber(g, opinions, cfg.params.epsilon);
    if (g.edge_count() > 0) out["diversity"] = neighbor_opinion_diversity(g, opinions);
    const auto sizes = opinion_partition(opinions).cluster_sizes();
    if (sizes[0] > 0 && sizes[1] > 0 && g.edge_count() > 0) {
      out["opinion_segregation"] = segregation_index(g, opinion_partition(opinions));
    }
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_serve(const CommonOptions& opts, const ServeOptions& s) {
  auto cfg = resolve_config(opts, "fig3");
  try {
    cfg.resolved().validate();
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  if (s.port > 65535) throw UsageError("port must be in [0, 65535]");
  SessionServer server(cfg, static_cast<std::uint16_t>(s.port), s.host);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "listening on " << s.host << ":" << server.port() << std::endl;
  std::jthread watcher([&](std::stop_token stop) {
    while (!stop.stop_requested() && !g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  });
  server.serve();
  return 0;
}

}  // namespace ecm::cli
