#include "ecm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "ecm/error.hpp"

namespace ecm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t check_interval(const SimState& state) {
  return std::max<std::uint64_t>(1, state.node_count());
}

}  // namespace

std::string_view to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::censored: return "censored";
    case RunStatus::excluded: return "excluded";
  }
  return "censored";
}

ChamberOutcome time_to_echo_chamber(SimState& state, bool apply_exclusion) {
  bool excluded = false;
  const auto outcome = run_until(
      state,
      [&](const SimState& s) {
        if (is_echo_chamber(s)) return true;
        if (apply_exclusion && exclusion_check(s.graph, s.opinions, s.params.epsilon)) {
          excluded = true;
          return true;
        }
        return false;
      },
      check_interval(state));
  if (excluded) return {RunStatus::excluded, outcome.t};
  return {outcome.converged ? RunStatus::converged : RunStatus::censored, outcome.t};
}

ChamberOutcome time_to_echo_chamber(Params params, std::uint64_t seed) {
  params.seed = seed;
  params.record_events = false;
  auto state = init_simulation(params);
  return time_to_echo_chamber(state);
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1U, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const auto i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  workers.clear();
  if (error) std::rethrow_exception(error);
}

std::vector<double> log_grid(double lo, double hi, std::size_t points_per_decade) {
  if (!(lo > 0.0 && hi >= lo) || points_per_decade == 0) {
    throw ParameterError("log_grid needs 0 < lo <= hi and points_per_decade >= 1");
  }
  const double decades = std::log10(hi / lo);
  const auto steps = static_cast<std::size_t>(std::llround(decades * static_cast<double>(points_per_decade)));
  std::vector<double> out;
  for (std::size_t k = 0; k <= steps; ++k) {
    out.push_back(steps == 0 ? lo : lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(steps)));
  }
  return out;
}

namespace {

void validate_base(const Params& base) {
  Params probe = base;
  probe.validate();
}

}  // namespace

SweepResult sweep_mu_q(const SweepSpec& spec, std::size_t jobs) {
  if (spec.runs_per_cell < 1) throw ParameterError("runs_per_cell must be >= 1");
  validate_base(spec.base);
  SweepResult result;
  result.mu_count = spec.mu_values.size();
  for (double q : spec.q_values) {
    for (double mu : spec.mu_values) {
      SweepCell cell;
      cell.mu = mu;
      cell.q = q;
      cell.runs.resize(spec.runs_per_cell);
      result.cells.push_back(std::move(cell));
    }
  }
  for (const auto& cell : result.cells) {
    Params probe = spec.base;
    probe.mu = cell.mu;
    probe.q = cell.q;
    probe.validate();
  }

  const auto runs = spec.runs_per_cell;
  parallel_for(result.cells.size() * runs, jobs, [&](std::size_t job) {
    const auto c = job / runs;
    const auto r = job % runs;
    auto& cell = result.cells[c];
    Params params = spec.base;
    params.mu = cell.mu;
    params.q = cell.q;
    cell.runs[r] = time_to_echo_chamber(params, derive_seed(spec.master_seed, c, r));
  });

  const double t_max = static_cast<double>(spec.base.t_max);
  for (auto& cell : result.cells) {
    std::vector<double> times, with_censored;
    for (const auto& run : cell.runs) {
      switch (run.status) {
        case RunStatus::converged:
          ++cell.converged;
          times.push_back(static_cast<double>(run.t));
          with_censored.push_back(static_cast<double>(run.t));
          break;
        case RunStatus::censored:
          ++cell.censored;
          with_censored.push_back(t_max);
          break;
        case RunStatus::excluded: ++cell.excluded; break;
      }
    }
    cell.mean_time = times.empty() ? kNaN : mean(times);
    cell.sd_time = times.empty() ? kNaN : stddev(times);
    cell.mean_time_with_censored = with_censored.empty() ? kNaN : mean(with_censored);
  }
  return result;
}

std::vector<EpsilonRow> sweep_epsilon(const std::vector<double>& values, std::size_t runs,
                                      const Params& base, std::uint64_t master_seed,
                                      const PeakSettings& peaks, std::size_t jobs) {
  if (runs < 1) throw ParameterError("runs must be >= 1");
  for (double eps : values) {
    Params probe = base;
    probe.epsilon = eps;
    probe.validate();
  }
  std::vector<double> peak_counts(values.size() * runs), distances(values.size() * runs);
  std::vector<char> converged(values.size() * runs, 0);
  parallel_for(values.size() * runs, jobs, [&](std::size_t job) {
    const auto c = job / runs;
    const auto r = job % runs;
    Params params = base;
    params.epsilon = values[c];
    params.seed = derive_seed(master_seed, 0, r);
    params.record_events = false;
    auto state = init_simulation(params);
    const auto outcome = time_to_echo_chamber(state, false);
    converged[job] = outcome.status == RunStatus::converged;
    peak_counts[job] = static_cast<double>(count_opinion_peaks(state.opinions, peaks));
    distances[job] = max_opinion_distance(state.opinions);
  });

  std::vector<EpsilonRow> rows;
  for (std::size_t c = 0; c < values.size(); ++c) {
    const std::span<const double> pk(peak_counts.data() + c * runs, runs);
    const std::span<const double> dist(distances.data() + c * runs, runs);
    EpsilonRow row;
    row.epsilon = values[c];
    row.mean_peaks = mean(pk);
    row.sd_peaks = stddev(pk);
    row.mean_max_distance = mean(dist);
    row.sd_max_distance = stddev(dist);
    row.runs = runs;
    row.converged = static_cast<std::size_t>(
        std::count(converged.begin() + static_cast<std::ptrdiff_t>(c * runs),
                   converged.begin() + static_cast<std::ptrdiff_t>((c + 1) * runs), 1));
    rows.push_back(row);
  }
  return rows;
}

ScalingResult scaling_in_n(const std::vector<std::size_t>& n_values, std::size_t runs,
                           const Params& base, double density, std::uint64_t master_seed,
                           std::size_t jobs) {
  if (runs < 1) throw ParameterError("runs must be >= 1");
  std::vector<Params> per_n;
  for (auto n : n_values) {
    Params params = base;
    params.n = n;
    params.e = edges_for_density(n, density);
    params.record_events = false;
    params.validate();
    per_n.push_back(params);
  }
  std::vector<ChamberOutcome> outcomes(n_values.size() * runs);
  parallel_for(outcomes.size(), jobs, [&](std::size_t job) {
    const auto c = job / runs;
    outcomes[job] = time_to_echo_chamber(per_n[c], derive_seed(master_seed, c, job % runs));
  });

  ScalingResult result;
  std::vector<double> xs, ys;
  for (std::size_t c = 0; c < n_values.size(); ++c) {
    ScalingRow row;
    row.n = per_n[c].n;
    row.e = per_n[c].e;
    std::vector<double> times;
    for (std::size_t r = 0; r < runs; ++r) {
      const auto& o = outcomes[c * runs + r];
      if (o.status == RunStatus::converged) {
        ++row.converged;
        times.push_back(static_cast<double>(o.t));
      } else if (o.status == RunStatus::censored) {
        ++row.censored;
      } else {
        ++row.excluded;
      }
    }
    row.mean_time = times.empty() ? kNaN : mean(times);
    row.sd_time = times.empty() ? kNaN : stddev(times);
    if (!times.empty()) {
      xs.push_back(static_cast<double>(row.n));
      ys.push_back(row.mean_time);
    }
    result.rows.push_back(row);
  }
  try {
    result.fit = linear_fit(xs, ys);
  } catch (const ParameterError&) {
    result.fit.reset();
  }
  return result;
}

StrategyComparison compare_strategies(std::size_t runs, const Params& base,
                                      std::uint64_t master_seed, const PeakSettings& peaks,
                                      std::size_t jobs) {
  if (runs < 1) throw ParameterError("runs must be >= 1");
  validate_base(base);
  struct RunRecord {
    double closed = 0.0;
    double time = 0.0;
    double peaks = 0.0;
    double max_in = 0.0;
    bool converged = false;
    std::vector<std::size_t> in_degrees;
  };
  std::vector<RunRecord> records(kStrategies.size() * runs);
  parallel_for(records.size(), jobs, [&](std::size_t job) {
    const auto s = job / runs;
    const auto r = job % runs;
    Params params = base;
    params.strategy = kStrategies[s];
    params.seed = derive_seed(master_seed, 0, r);
    params.record_events = false;
    auto state = init_simulation(params);
    const auto outcome = time_to_echo_chamber(state, false);
    auto& rec = records[job];
    rec.converged = outcome.status == RunStatus::converged;
    rec.time = static_cast<double>(outcome.t);
    rec.closed = static_cast<double>(triad_census(state.graph).closed);
    rec.peaks = static_cast<double>(count_opinion_peaks(state.opinions, peaks));
    rec.in_degrees.resize(state.graph.node_count());
    std::size_t max_in = 0;
    for (NodeId v = 0; v < state.graph.node_count(); ++v) {
      rec.in_degrees[v] = state.graph.in_degree(v);
      max_in = std::max(max_in, rec.in_degrees[v]);
    }
    rec.max_in = static_cast<double>(max_in);
  });

  StrategyComparison cmp;
  for (std::size_t s = 0; s < kStrategies.size(); ++s) {
    auto& st = cmp.stats[s];
    st.strategy = kStrategies[s];
    std::vector<std::size_t> at_least;
    std::size_t total_nodes = 0;
    for (std::size_t r = 0; r < runs; ++r) {
      const auto& rec = records[s * runs + r];
      st.closed_triads.push_back(rec.closed);
      st.times.push_back(rec.time);
      st.peaks.push_back(rec.peaks);
      st.max_in_degree.push_back(rec.max_in);
      if (rec.converged) ++st.converged;
      for (auto d : rec.in_degrees) {
        if (at_least.size() <= d) at_least.resize(d + 1, 0);
        ++at_least[d];
      }
      total_nodes += rec.in_degrees.size();
    }
    for (std::size_t d = at_least.size(); d-- > 1;) at_least[d - 1] += at_least[d];
    for (std::size_t d = 0; d < at_least.size(); ++d) {
      st.ccdf.push_back({d, total_nodes == 0 ? 1.0
                                             : static_cast<double>(at_least[d]) /
                                                   static_cast<double>(total_nodes)});
    }
  }
  cmp.repost_vs_random = mann_whitney(cmp.get(RewireStrategy::repost).closed_triads,
                                      cmp.get(RewireStrategy::random).closed_triads);
  cmp.recommendation_vs_random = mann_whitney(cmp.get(RewireStrategy::recommendation).closed_triads,
                                              cmp.get(RewireStrategy::random).closed_triads);
  return cmp;
}

}  // namespace ecm
