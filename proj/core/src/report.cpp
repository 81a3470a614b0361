#include "ecm/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "ecm/error.hpp"

#ifndef ECM_GIT_COMMIT
#define ECM_GIT_COMMIT "unknown"
#endif

namespace ecm {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_snapshots_csv(std::ostream& out, std::span<const MetricsSnapshot> rows) {
  out << "t,segregation,triad_fraction,entropy,diversity";
  for (std::size_t b = 0; b < kOpinionHistogramBins; ++b) out << ",hist_" << b;
  out << '\n';
  for (const auto& r : rows) {
    out << r.t << ',' << format_number(r.segregation) << ',' << format_number(r.triad_fraction)
        << ',' << format_number(r.mean_screen_entropy) << ',' << format_number(r.neighbor_diversity);
    for (auto c : r.opinion_histogram) out << ',' << c;
    out << '\n';
  }
}

void write_events_csv(std::ostream& out, std::span<const Event> events) {
  out << "step,kind,actor,message_id,originator,unfollowed,new_friend\n";
  for (const auto& ev : events) {
    out << ev.step << ',' << to_string(ev.kind) << ',' << ev.actor << ',';
    switch (ev.kind) {
      case EventKind::post: out << ev.message_id << ",,,\n"; break;
      case EventKind::repost: out << ev.message_id << ',' << ev.originator << ",,\n"; break;
      case EventKind::rewire: out << ",," << ev.unfollowed << ',' << ev.new_friend << '\n'; break;
    }
  }
}

void write_opinions_csv(std::ostream& out, std::span<const double> opinions,
                        const std::vector<std::string>* names) {
  out << "node,opinion\n";
  for (std::size_t v = 0; v < opinions.size(); ++v) {
    if (names) {
      out << (*names)[v];
    } else {
      out << v;
    }
    out << ',' << format_number(opinions[v]) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "mu,q,runs,converged,censored,excluded,mean_time,sd_time,mean_time_with_censored\n";
  for (const auto& c : result.cells) {
    out << format_number(c.mu) << ',' << format_number(c.q) << ',' << c.runs.size() << ','
        << c.converged << ',' << c.censored << ',' << c.excluded << ',' << format_number(c.mean_time)
        << ',' << format_number(c.sd_time) << ',' << format_number(c.mean_time_with_censored) << '\n';
  }
}

void write_sweep_runs_csv(std::ostream& out, const SweepResult& result) {
  out << "mu,q,run,status,t\n";
  for (const auto& c : result.cells) {
    for (std::size_t r = 0; r < c.runs.size(); ++r) {
      out << format_number(c.mu) << ',' << format_number(c.q) << ',' << r << ','
          << to_string(c.runs[r].status) << ',' << c.runs[r].t << '\n';
    }
  }
}

void write_epsilon_csv(std::ostream& out, std::span<const EpsilonRow> rows) {
  out << "epsilon,runs,converged,mean_peaks,sd_peaks,mean_max_distance,sd_max_distance\n";
  for (const auto& r : rows) {
    out << format_number(r.epsilon) << ',' << r.runs << ',' << r.converged << ','
        << format_number(r.mean_peaks) << ',' << format_number(r.sd_peaks) << ','
        << format_number(r.mean_max_distance) << ',' << format_number(r.sd_max_distance) << '\n';
  }
}

void write_scaling_csv(std::ostream& out, const ScalingResult& result) {
  out << "n,e,converged,censored,excluded,mean_time,sd_time\n";
  for (const auto& r : result.rows) {
    out << r.n << ',' << r.e << ',' << r.converged << ',' << r.censored << ',' << r.excluded << ','
        << format_number(r.mean_time) << ',' << format_number(r.sd_time) << '\n';
  }
}

void write_strategy_runs_csv(std::ostream& out, const StrategyComparison& cmp) {
  out << "strategy,run,closed_triads,time,peaks,max_in_degree\n";
  for (const auto& st : cmp.stats) {
    for (std::size_t r = 0; r < st.times.size(); ++r) {
      out << to_string(st.strategy) << ',' << r << ',' << format_number(st.closed_triads[r]) << ','
          << format_number(st.times[r]) << ',' << format_number(st.peaks[r]) << ','
          << format_number(st.max_in_degree[r]) << '\n';
    }
  }
}

void write_strategy_summary_csv(std::ostream& out, const StrategyComparison& cmp) {
  out << "strategy,runs,converged,mean_closed_triads,sd_closed_triads,mean_time,sd_time,"
         "mean_peaks,mean_max_in_degree,u_vs_random,p_vs_random\n";
  for (const auto& st : cmp.stats) {
    out << to_string(st.strategy) << ',' << st.times.size() << ',' << st.converged << ','
        << format_number(mean(st.closed_triads)) << ',' << format_number(stddev(st.closed_triads))
        << ',' << format_number(mean(st.times)) << ',' << format_number(stddev(st.times)) << ','
        << format_number(mean(st.peaks)) << ',' << format_number(mean(st.max_in_degree)) << ',';
    if (st.strategy == RewireStrategy::repost) {
      out << format_number(cmp.repost_vs_random.u) << ',' << format_number(cmp.repost_vs_random.p_value);
    } else if (st.strategy == RewireStrategy::recommendation) {
      out << format_number(cmp.recommendation_vs_random.u) << ','
          << format_number(cmp.recommendation_vs_random.p_value);
    } else {
      out << ',';
    }
    out << '\n';
  }
}

void write_ccdf_csv(std::ostream& out, const StrategyComparison& cmp) {
  out << "strategy,in_degree,fraction\n";
  for (const auto& st : cmp.stats) {
    for (const auto& pt : st.ccdf) {
      out << to_string(st.strategy) << ',' << pt.degree << ',' << format_number(pt.fraction) << '\n';
    }
  }
}

void write_histogram_csv(std::ostream& out, std::span<const std::size_t> counts, double lo, double hi) {
  out << "bin_lo,bin_hi,count\n";
  const double width = (hi - lo) / static_cast<double>(std::max<std::size_t>(1, counts.size()));
  for (std::size_t b = 0; b < counts.size(); ++b) {
    out << format_number(lo + width * static_cast<double>(b)) << ','
        << format_number(lo + width * static_cast<double>(b + 1)) << ',' << counts[b] << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw DataError("write failed for " + path.string());
}

nlohmann::json params_json(const Params& p) {
  return {{"n", p.n},
          {"e", p.e},
          {"epsilon", p.epsilon},
          {"mu", p.mu},
          {"p", p.p},
          {"q", p.q},
          {"l", p.l},
          {"strategy", std::string(to_string(p.strategy))},
          {"t_max", p.t_max},
          {"seed", p.seed},
          {"recent_window", p.recent_window}};
}

void write_validation_report(const std::filesystem::path& dir, const ValidationReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());

  std::ostringstream series;
  series << "epoch,t,retweet_edges,scc_nodes,scc_edges,segregation,triad_fraction,diversity\n";
  for (const auto& s : report.series) {
    series << s.epoch << ',' << s.t << ',' << s.retweet_edges << ',' << s.scc_nodes << ','
           << s.scc_edges << ',' << format_number(s.segregation) << ','
           << format_number(s.triad_fraction) << ',' << format_number(s.diversity) << '\n';
  }
  write_text_file(dir / "series.csv", series.str());

  std::ostringstream d_o;
  write_histogram_csv(d_o, report.do_histogram, 0.0, 2.0);
  write_text_file(dir / "do_hist.csv", d_o.str());
  std::ostringstream d_t;
  write_histogram_csv(d_t, report.dt_histogram, 0.0, 1.0);
  write_text_file(dir / "dt_hist.csv", d_t.str());

  nlohmann::json meta = {
      {"params", params_json(report.params)},
      {"stop_epoch", report.stop_epoch},
      {"censored", report.censored},
      {"s_emp", report.empirical_segregation},
      {"empirical_triad_fraction", report.empirical_triad_fraction},
      {"empirical_nodes", report.empirical_nodes},
      {"empirical_edges", report.empirical_edges},
      {"do_peaks", report.do_peaks},
      {"dt_peaks", report.dt_peaks},
      {"hashtag_coverage", report.hashtag_coverage},
  };
  if (!report.series.empty()) {
    const double s = report.series.back().segregation;
    meta["s_sim"] = std::isnan(s) ? nlohmann::json() : nlohmann::json(s);
  }
  write_text_file(dir / "meta.json", meta.dump(2) + "\n");
}

std::string build_commit() { return ECM_GIT_COMMIT; }

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                 "#9467bd", "#ff7f0e", "#17becf"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  double tr(double v) const { return log ? std::log10(v) : v; }
  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  double frac(double v) const { return hi > lo ? (tr(v) - lo) / (hi - lo) : 0.5; }
};

Axis fit_axis(const std::vector<double>& values, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (!a.usable(v)) continue;
    lo = std::min(lo, a.tr(v));
    hi = std::max(hi, a.tr(v));
  }
  if (!std::isfinite(lo)) return a;
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = log ? 0.0 : 0.05 * (hi - lo);
  a.lo = lo - pad;
  a.hi = hi + pad;
  return a;
}

void header(std::ostringstream& s, const PlotSpec& spec) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << xml_escape(spec.title) << "</text>\n"
    << "<text x=\"" << kLeft + (kWidth - kLeft - kRight) / 2 << "\" y=\"" << kHeight - 12
    << "\" text-anchor=\"middle\">" << xml_escape(spec.x_label) << "</text>\n"
    << "<text transform=\"translate(18," << kTop + (kHeight - kTop - kBottom) / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(spec.y_label) << "</text>\n";
}

void ticks(std::ostringstream& s, const Axis& x, const Axis& y) {
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double f = k / 4.0;
    const double xv = x.lo + f * (x.hi - x.lo);
    const double yv = y.lo + f * (y.hi - y.lo);
    const double px = kLeft + f * pw;
    const double py = kTop + (1.0 - f) * ph;
    s << "<text x=\"" << px << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
      << fmt(x.log ? std::pow(10.0, xv) : xv) << "</text>\n";
    s << "<text x=\"" << kLeft - 6 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
      << fmt(y.log ? std::pow(10.0, yv) : yv) << "</text>\n";
  }
}

}  // namespace

std::string svg_line_plot(const PlotSpec& spec, std::span<const PlotSeries> series) {
  std::vector<double> all_x, all_y;
  for (const auto& sr : series) {
    for (std::size_t k = 0; k < sr.x.size() && k < sr.y.size(); ++k) {
      const double e = k < sr.err.size() && std::isfinite(sr.err[k]) ? sr.err[k] : 0.0;
      all_x.push_back(sr.x[k]);
      all_y.push_back(sr.y[k] + e);
      all_y.push_back(sr.y[k] - e);
    }
  }
  const auto x = fit_axis(all_x, spec.log_x);
  const auto y = fit_axis(all_y, spec.log_y);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + x.frac(v) * pw; };
  auto py = [&](double v) { return kTop + (1.0 - std::clamp(y.frac(v), 0.0, 1.0)) * ph; };

  std::ostringstream s;
  header(s, spec);
  ticks(s, x, y);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& sr = series[i];
    const char* color = kPalette[i % kPalette.size()];
    std::string path;
    for (std::size_t k = 0; k < sr.x.size() && k < sr.y.size(); ++k) {
      if (!x.usable(sr.x[k]) || !y.usable(sr.y[k])) continue;
      path += (path.empty() ? "M" : " L") + fmt(px(sr.x[k])) + "," + fmt(py(sr.y[k]));
      s << "<circle cx=\"" << px(sr.x[k]) << "\" cy=\"" << py(sr.y[k]) << "\" r=\"3\" fill=\""
        << color << "\"/>\n";
      if (k < sr.err.size() && std::isfinite(sr.err[k]) && sr.err[k] > 0.0) {
        const double lo = sr.y[k] - sr.err[k];
        const double hi = sr.y[k] + sr.err[k];
        if (y.usable(lo) && y.usable(hi)) {
          s << "<line x1=\"" << px(sr.x[k]) << "\" x2=\"" << px(sr.x[k]) << "\" y1=\"" << py(lo)
            << "\" y2=\"" << py(hi) << "\" stroke=\"" << color << "\"/>\n";
        }
      }
    }
    if (!path.empty()) {
      s << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    }
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(i);
    s << "<rect x=\"" << kWidth - kRight + 12 << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"3\" fill=\""
      << color << "\"/>\n<text x=\"" << kWidth - kRight + 30 << "\" y=\"" << ly << "\">"
      << xml_escape(sr.name) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string svg_heatmap(const PlotSpec& spec, std::span<const double> xs, std::span<const double> ys,
                        std::span<const double> values) {
  if (values.size() != xs.size() * ys.size()) {
    throw ParameterError("heat map needs one value per grid cell");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v) || (spec.log_y && v <= 0.0)) continue;
    const double t = spec.log_y ? std::log10(v) : v;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const double cw = pw / static_cast<double>(std::max<std::size_t>(1, xs.size()));
  const double ch = ph / static_cast<double>(std::max<std::size_t>(1, ys.size()));

  // Dark blue to yellow.
  auto color = [&](double v) -> std::string {
    if (!std::isfinite(v) || !std::isfinite(lo)) return "#bbbbbb";
    const double t = spec.log_y ? std::log10(v) : v;
    const double f = hi > lo ? (t - lo) / (hi - lo) : 0.5;
    const int r = static_cast<int>(std::lround(40 + f * 213));
    const int g = static_cast<int>(std::lround(30 + f * 201));
    const int b = static_cast<int>(std::lround(120 - f * 100));
    std::ostringstream c;
    c << "rgb(" << r << ',' << g << ',' << b << ')';
    return c.str();
  };

  std::ostringstream s;
  header(s, spec);
  for (std::size_t iy = 0; iy < ys.size(); ++iy) {
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
      const double v = values[iy * xs.size() + ix];
      s << "<rect x=\"" << kLeft + cw * static_cast<double>(ix) << "\" y=\""
        << kTop + ph - ch * static_cast<double>(iy + 1) << "\" width=\"" << cw << "\" height=\"" << ch
        << "\" fill=\"" << color(v) << "\"><title>" << fmt(xs[ix]) << ", " << fmt(ys[iy]) << ": "
        << fmt(v) << "</title></rect>\n";
    }
  }
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  const std::size_t step_x = std::max<std::size_t>(1, xs.size() / 6);
  for (std::size_t ix = 0; ix < xs.size(); ix += step_x) {
    s << "<text x=\"" << kLeft + cw * (static_cast<double>(ix) + 0.5) << "\" y=\"" << kTop + ph + 16
      << "\" text-anchor=\"middle\">" << fmt(xs[ix]) << "</text>\n";
  }
  const std::size_t step_y = std::max<std::size_t>(1, ys.size() / 6);
  for (std::size_t iy = 0; iy < ys.size(); iy += step_y) {
    s << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + ph - ch * (static_cast<double>(iy) + 0.5) + 4
      << "\" text-anchor=\"end\">" << fmt(ys[iy]) << "</text>\n";
  }
  if (std::isfinite(lo)) {
    s << "<text x=\"" << kWidth - kRight + 12 << "\" y=\"" << kTop + 12 << "\">max "
      << fmt(spec.log_y ? std::pow(10.0, hi) : hi) << "</text>\n"
      << "<text x=\"" << kWidth - kRight + 12 << "\" y=\"" << kTop + 30 << "\">min "
      << fmt(spec.log_y ? std::pow(10.0, lo) : lo) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace ecm
