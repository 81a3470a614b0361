#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "ecm/graph.hpp"
#include "ecm/metrics.hpp"
#include "ecm/sim.hpp"
#include "ecm/stats.hpp"

namespace ecm {

enum class RunStatus { converged, censored, excluded };

std::string_view to_string(RunStatus s) noexcept;

struct ChamberOutcome {
  RunStatus status = RunStatus::censored;
  std::uint64_t t = 0;
};

/// Runs `state` until it is an echo chamber (checked every N steps), until
/// t_max (censored), or, with `apply_exclusion`, until exclusion_check fires.
ChamberOutcome time_to_echo_chamber(SimState& state, bool apply_exclusion = true);
ChamberOutcome time_to_echo_chamber(Params params, std::uint64_t seed);

/// Calls fn(i) for i in [0, count) on up to `jobs` threads (0 = hardware
/// concurrency). The first exception thrown by fn is rethrown.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

/// n values log-spaced over [lo, hi], both ends included.
std::vector<double> log_grid(double lo, double hi, std::size_t points_per_decade);

struct SweepSpec {
  std::vector<double> mu_values;
  std::vector<double> q_values;
  std::size_t runs_per_cell = 20;
  Params base;
  std::uint64_t master_seed = 1;
};

struct SweepCell {
  double mu = 0.0;
  double q = 0.0;
  std::size_t converged = 0;
  std::size_t censored = 0;
  std::size_t excluded = 0;
  double mean_time = 0.0;  // converged runs only; NaN if none
  double sd_time = 0.0;
  double mean_time_with_censored = 0.0;  // censored runs counted at t_max; NaN if all excluded
  std::vector<ChamberOutcome> runs;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // q-major: cell = iq * |mu| + imu
  std::size_t mu_count = 0;
  const SweepCell& at(std::size_t imu, std::size_t iq) const { return cells[iq * mu_count + imu]; }
};

/// Cell (imu, iq) run r uses seed derive_seed(master, cell index, r).
SweepResult sweep_mu_q(const SweepSpec& spec, std::size_t jobs = 0);

struct EpsilonRow {
  double epsilon = 0.0;
  double mean_peaks = 0.0;
  double sd_peaks = 0.0;
  double mean_max_distance = 0.0;
  double sd_max_distance = 0.0;
  std::size_t converged = 0;
  std::size_t runs = 0;
};

/// Runs to echo chamber or t_max for each epsilon; run r uses the same seed
/// for every epsilon.
std::vector<EpsilonRow> sweep_epsilon(const std::vector<double>& values, std::size_t runs,
                                      const Params& base, std::uint64_t master_seed,
                                      const PeakSettings& peaks = {}, std::size_t jobs = 0);

struct ScalingRow {
  std::size_t n = 0;
  std::size_t e = 0;
  double mean_time = 0.0;  // converged runs only; NaN if none
  double sd_time = 0.0;
  std::size_t converged = 0;
  std::size_t censored = 0;
  std::size_t excluded = 0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  std::optional<LinearFit> fit;  // empty when fewer than two sizes produced a mean
};

/// Time to echo chamber against N at fixed density e = round(d n (n - 1)).
ScalingResult scaling_in_n(const std::vector<std::size_t>& n_values, std::size_t runs,
                           const Params& base, double density, std::uint64_t master_seed,
                           std::size_t jobs = 0);

inline constexpr std::array<RewireStrategy, 3> kStrategies = {
    RewireStrategy::random, RewireStrategy::repost, RewireStrategy::recommendation};

struct StrategyStats {
  RewireStrategy strategy = RewireStrategy::random;
  std::vector<double> closed_triads;  // per run, follower graph at stop
  std::vector<double> times;          // per run, censored runs at t_max
  std::vector<double> peaks;
  std::vector<double> max_in_degree;
  std::size_t converged = 0;
  std::vector<CcdfPoint> ccdf;  // pooled over runs
};

struct StrategyComparison {
  std::array<StrategyStats, 3> stats;  // in kStrategies order
  RankTest repost_vs_random;
  RankTest recommendation_vs_random;

  const StrategyStats& get(RewireStrategy s) const { return stats[static_cast<std::size_t>(s)]; }
};

/// Each run index uses the same seed, hence the same initial graph and
/// opinions, under every strategy.
StrategyComparison compare_strategies(std::size_t runs, const Params& base,
                                      std::uint64_t master_seed, const PeakSettings& peaks = {},
                                      std::size_t jobs = 0);

}  // namespace ecm
