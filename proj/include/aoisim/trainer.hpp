#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aoisim/config.hpp"
#include "aoisim/policy.hpp"

namespace aoisim {

struct TrainConfig {
  int population = 48;        // >= 4
  double elite_fraction = 0.25;
  int iterations = 40;
  int episodes = 8;           // E: common seeds shared by every candidate
  double init_mean = 0.0;
  double init_std = 1.0;
  double std_floor = 1e-3;
  // Additive exploration noise on the refit stds, decaying linearly to zero
  // over the first half of the iterations; guards against premature collapse.
  double exploration_noise = 0.25;
  std::uint64_t seed = 1;

  int elite_count() const;  // max(1, floor(elite_fraction * population))
  void validate() const;
};

struct TrainLog {
  struct Row {
    int iteration = 0;
    double best = 0.0;      // best objective seen so far (nondecreasing)
    double mean = 0.0;      // population mean this iteration
    double std_norm = 0.0;  // l2 norm of the sampling stds
  };
  std::vector<Row> rows;
};

struct CemOutcome {
  std::vector<double> best_params;
  double best_value = 0.0;
  TrainLog log;
};

// Cross-entropy maximization over a diagonal Gaussian. The incumbent best
// joins every elite refit, so the logged best is monotone. Candidate
// evaluations run in parallel and reduce in candidate order. A non-finite
// objective value aborts with diagnostics.
CemOutcome cem_maximize(const TrainConfig& tc, int dim,
                        const std::function<double(std::span<const double>)>& objective,
                        bool parallel = true);

struct TrainedPolicy {
  UpperPolicy policy;
  TrainLog log;
  double best_return = 0.0;
};

// Optimizes an upper policy against the mean return of `episodes` seeded
// training episodes (undiscounted, horizon cfg.train_epochs). The same
// episode seeds are used for every candidate.
TrainedPolicy train_policy(const SimConfig& cfg, const TrainConfig& tc,
                           UpperPolicy::Kind kind, ObsModel model, ObsVariant variant,
                           bool parallel = true);

std::string train_log_csv(const TrainLog& log);

}  // namespace aoisim
