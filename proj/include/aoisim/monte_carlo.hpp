#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aoisim/config.hpp"
#include "aoisim/simulation.hpp"

namespace aoisim {

struct MeanCi {
  double mean = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

// Per-epoch and overall statistics over S independent runs, 95% normal
// confidence intervals (mean +- 1.96 * s / sqrt(S), sample std; zero width
// for a single run).
struct AggregateResult {
  int runs = 0;
  std::vector<MeanCi> avg_age;              // per epoch
  std::vector<MeanCi> cum_drops_per_agent;  // per epoch
  MeanCi time_avg_age;
  MeanCi final_cum_drops_per_agent;
  MeanCi c2_ack_drops;
  MeanCi mean_c1_load;  // per-run mean of the per-epoch loads
  double min_time_avg_age = 0.0;
  double max_time_avg_age = 0.0;
};

struct BatchOptions {
  bool parallel = true;  // serial path kept as the reference implementation
  RunOptions run;
};

// Runs every seed independently (OpenMP across seeds when parallel) and
// reduces in seed-index order, so the aggregate is bit-identical for any
// thread count. Seeds must be pairwise distinct.
std::vector<EpisodeMetrics> run_batch(const SimConfig& cfg, const PolicySpec& policy,
                                      ObsModel model, ObsVariant variant,
                                      const std::vector<std::uint64_t>& seeds,
                                      const BatchOptions& opts = {});

AggregateResult aggregate(const std::vector<EpisodeMetrics>& runs);

AggregateResult monte_carlo(const SimConfig& cfg, const PolicySpec& policy,
                            ObsModel model, ObsVariant variant,
                            const std::vector<std::uint64_t>& seeds,
                            const BatchOptions& opts = {});

// Convenience: seeds base, base+1, ..., base+count-1.
std::vector<std::uint64_t> seed_range(std::uint64_t base, int count);

enum class SweepKind { Rate, Threshold, Agents };

struct SweepResult {
  SweepKind kind = SweepKind::Rate;
  std::vector<double> grid;
  std::vector<AggregateResult> results;
};

// Default grids: rate 0.1..1.0, threshold 1..8, agents {10,100,200,500,1000,2000}.
std::vector<double> default_grid(SweepKind kind);

// One aggregate per grid point. Rate and threshold sweeps run the matching
// fixed policy; the agents sweep re-runs `policy` with N set from the grid
// (paths rescale as floor(kappa*N)).
SweepResult sweep(SweepKind kind, const std::vector<double>& grid, const SimConfig& cfg,
                  const PolicySpec& policy, ObsModel model, ObsVariant variant,
                  std::uint64_t base_seed, int runs, const BatchOptions& opts = {});

}  // namespace aoisim
