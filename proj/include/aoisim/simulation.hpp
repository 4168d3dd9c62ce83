#pragma once

#include <cstdint>
#include <vector>

#include "aoisim/config.hpp"
#include "aoisim/policy.hpp"

namespace aoisim {

struct FilterTraceRow {
  double t = 0.0;
  double true_age = 0.0;
  double belief_mean = 0.0;
  double belief_std = 0.0;
  int acks_received = 0;
};

struct PopulationSnapshot {
  double t = 0.0;
  std::vector<double> true_age;
  std::vector<double> belief_mean;
};

struct RunOptions {
  // Epoch count override; defaults to cfg.eval_epochs. Metric arrays always
  // have horizon+1 entries, sampled at t = 0, dt, ..., horizon*dt.
  int horizon = -1;

  // Particle filters are maintained automatically for avg-belief and
  // particles runs; set this to keep them alive in a true-state run
  // (belief diagnostics, traces).
  bool maintain_filters = false;

  int trace_agent = -1;                 // filter trace for one agent
  std::vector<double> snapshot_times;   // population snapshots (trace runs)

  bool validate_invariants = false;     // per-epoch conservation checks
  bool collect_belief_error = false;    // belief-vs-truth accumulators
  // Samples per epoch for the belief-error accumulators; values above one
  // approximate the continuous time average on a uniform grid. Sampling is
  // read-only and never perturbs the simulation.
  int belief_error_substeps = 1;
  bool verify_reset_exactness = false;  // check (rho, z) after each reset

  // Replay hooks for tests: per-epoch per-agent actions, and scripted
  // channel delays consumed before any random draw.
  const std::vector<std::vector<std::uint8_t>>* action_script = nullptr;
  const std::vector<double>* forward_delay_script = nullptr;
  const std::vector<double>* reverse_delay_script = nullptr;
};

struct EpisodeMetrics {
  std::vector<double> avg_age;              // length horizon+1, sampled at epoch times
  std::vector<double> cum_drops_per_agent;  // cumulative C1 drops / N
  std::vector<double> c1_load;              // nu_1 at each epoch time
  std::vector<double> rewards;              // per-epoch team reward
  double episode_return = 0.0;              // sum of rewards
  double time_avg_age = 0.0;                // mean of avg_age
  std::int64_t c1_drops = 0;
  std::int64_t c2_ack_drops = 0;
  std::vector<double> final_age;            // per agent at the last epoch
  double mean_reverse_rate_estimate = 0.0;  // mean of per-agent MLEs, 0 if none

  // Belief diagnostics (collect_belief_error): sums of |estimate - truth|
  // over all (agent, epoch) samples, for the filter mean and for the
  // ack-free fallback (time since the last admitted send).
  double abs_err_filter = 0.0;
  double abs_err_no_ack = 0.0;
  std::int64_t belief_samples = 0;
  std::int64_t reset_exactness_violations = 0;

  std::vector<FilterTraceRow> trace;
  std::vector<PopulationSnapshot> snapshots;
};

// Runs one seeded episode: per epoch the agents observe (true state or
// belief), quantize, draw actions, the channel admits, and the event queue
// then advances one epoch of continuous time, delivering messages and acks
// at their exact times.
EpisodeMetrics run_episode(const SimConfig& cfg, const PolicySpec& policy,
                           ObsModel model, ObsVariant variant, std::uint64_t seed,
                           const RunOptions& opts = {});

// Undiscounted return over the training horizon cfg.train_epochs.
double episode_return(const SimConfig& cfg, const PolicySpec& policy,
                      ObsModel model, ObsVariant variant, std::uint64_t seed);

}  // namespace aoisim
