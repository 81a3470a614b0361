#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecm/empirical.hpp"
#include "ecm/graph.hpp"
#include "ecm/harness.hpp"
#include "ecm/metrics.hpp"
#include "ecm/sim.hpp"

namespace ecm {

/// Shortest text that parses back to the same double; "nan" for NaN.
std::string format_number(double v);

void write_snapshots_csv(std::ostream& out, std::span<const MetricsSnapshot> rows);
void write_events_csv(std::ostream& out, std::span<const Event> events);
/// "node,opinion"; node is the external name when `names` is given.
void write_opinions_csv(std::ostream& out, std::span<const double> opinions,
                        const std::vector<std::string>* names = nullptr);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// One row per run: mu,q,run,status,t.
void write_sweep_runs_csv(std::ostream& out, const SweepResult& result);
void write_epsilon_csv(std::ostream& out, std::span<const EpsilonRow> rows);
void write_scaling_csv(std::ostream& out, const ScalingResult& result);
/// One row per (strategy, run).
void write_strategy_runs_csv(std::ostream& out, const StrategyComparison& cmp);
void write_strategy_summary_csv(std::ostream& out, const StrategyComparison& cmp);
/// Tidy pooled CCDF: strategy,in_degree,fraction.
void write_ccdf_csv(std::ostream& out, const StrategyComparison& cmp);

void write_histogram_csv(std::ostream& out, std::span<const std::size_t> counts, double lo, double hi);

/// series.csv, do_hist.csv, dt_hist.csv and meta.json under `dir`.
void write_validation_report(const std::filesystem::path& dir, const ValidationReport& report);

nlohmann::json params_json(const Params& p);

/// Commit id baked in at configure time, "unknown" outside a git checkout.
std::string build_commit();

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  // optional symmetric error bars
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Minimal standalone SVG line chart; non-finite points are skipped.
std::string svg_line_plot(const PlotSpec& spec, std::span<const PlotSeries> series);
/// Heat map of values[iy * xs.size() + ix]; spec.log_y makes the colour scale
/// logarithmic.
std::string svg_heatmap(const PlotSpec& spec, std::span<const double> xs,
                        std::span<const double> ys, std::span<const double> values);

/// Writes `text` to `path`, throwing DataError when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ecm
