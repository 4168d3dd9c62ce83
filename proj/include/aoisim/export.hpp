#pragma once

#include <cstdint>
#include <string>

#include "aoisim/config.hpp"
#include "aoisim/monte_carlo.hpp"
#include "aoisim/simulation.hpp"

namespace aoisim {

enum class ExportFormat { Csv, Doc };

ExportFormat parse_format(const std::string& s);

// Shortest exact decimal form (17 significant digits); parses back to the
// same bits.
std::string format_g17(double v);

// Aggregate metrics. CSV layout:
//   # aoisim-metrics v1 config=<hex> seed=<base seed> runs=<S>
//   epoch,mean,ci_lo,ci_hi,metric
// with per-epoch rows for avg_age and cum_drops_per_agent and epoch=-1 rows
// for the scalars (time_avg_age, final_cum_drops_per_agent, c2_ack_drops).
// Doc format carries the same numbers as JSON.
std::string render_metrics(const AggregateResult& agg, const SimConfig& cfg,
                           std::uint64_t base_seed, ExportFormat format);

// Sweep table. CSV layout:
//   # aoisim-sweep v1 kind=<rate|threshold|agents> config=<hex> seed=... runs=...
//   grid,mean,ci_lo,ci_hi,metric
// with one time_avg_age and one final_cum_drops_per_agent row per grid point.
std::string render_sweep(const SweepResult& sw, const SimConfig& cfg,
                         std::uint64_t base_seed, ExportFormat format);

// Filter trace for one agent:
//   # aoisim-trace v1 config=<hex> seed=... agent=...
//   t,true_age,belief_mean,belief_std,acks_received
std::string render_trace(const EpisodeMetrics& m, const SimConfig& cfg,
                         std::uint64_t seed, int agent, ExportFormat format);

// Population snapshots (histogram raw data):
//   # aoisim-hist v1 config=<hex> seed=...
//   t,agent,true_age,belief_mean
std::string render_snapshots(const EpisodeMetrics& m, const SimConfig& cfg,
                             std::uint64_t seed);

// Writes atomically enough for our purposes; errors carry the path.
void write_file(const std::string& path, const std::string& content);

}  // namespace aoisim
