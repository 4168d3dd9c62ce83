#include "aoisim/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace aoisim {
namespace {

MeanCi mean_ci(const std::vector<double>& xs) {
  double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  double mean = sum / n;
  double half = 0.0;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    double sd = std::sqrt(ss / (n - 1.0));
    half = 1.96 * sd / std::sqrt(n);
  }
  return {mean, mean - half, mean + half};
}

}  // namespace

std::vector<std::uint64_t> seed_range(std::uint64_t base, int count) {
  std::vector<std::uint64_t> seeds;
  seeds.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) seeds.push_back(base + static_cast<std::uint64_t>(i));
  return seeds;
}

std::vector<EpisodeMetrics> run_batch(const SimConfig& cfg, const PolicySpec& policy,
                                      ObsModel model, ObsVariant variant,
                                      const std::vector<std::uint64_t>& seeds,
                                      const BatchOptions& opts) {
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
  if (unique.size() != seeds.size())
    throw std::invalid_argument("Monte Carlo seeds must be pairwise distinct");
  cfg.validate();

  const int n = static_cast<int>(seeds.size());
  std::vector<EpisodeMetrics> results(static_cast<std::size_t>(n));
  std::vector<std::string> errors(static_cast<std::size_t>(n));

  if (opts.parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      try {
        results[static_cast<std::size_t>(i)] = run_episode(
            cfg, policy, model, variant, seeds[static_cast<std::size_t>(i)], opts.run);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      try {
        results[static_cast<std::size_t>(i)] = run_episode(
            cfg, policy, model, variant, seeds[static_cast<std::size_t>(i)], opts.run);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (!errors[static_cast<std::size_t>(i)].empty())
      throw std::runtime_error("run with seed " + std::to_string(seeds[static_cast<std::size_t>(i)]) +
                               " failed: " + errors[static_cast<std::size_t>(i)]);
  return results;
}

AggregateResult aggregate(const std::vector<EpisodeMetrics>& runs) {
  if (runs.empty()) throw std::invalid_argument("nothing to aggregate");
  AggregateResult agg;
  agg.runs = static_cast<int>(runs.size());
  const std::size_t epochs = runs.front().avg_age.size();
  for (const EpisodeMetrics& r : runs)
    if (r.avg_age.size() != epochs)
      throw std::invalid_argument("runs disagree on epoch count");

  std::vector<double> column(runs.size());
  for (std::size_t e = 0; e < epochs; ++e) {
    for (std::size_t i = 0; i < runs.size(); ++i) column[i] = runs[i].avg_age[e];
    agg.avg_age.push_back(mean_ci(column));
    for (std::size_t i = 0; i < runs.size(); ++i) column[i] = runs[i].cum_drops_per_agent[e];
    agg.cum_drops_per_agent.push_back(mean_ci(column));
  }
  for (std::size_t i = 0; i < runs.size(); ++i) column[i] = runs[i].time_avg_age;
  agg.time_avg_age = mean_ci(column);
  agg.min_time_avg_age = *std::min_element(column.begin(), column.end());
  agg.max_time_avg_age = *std::max_element(column.begin(), column.end());
  for (std::size_t i = 0; i < runs.size(); ++i)
    column[i] = runs[i].cum_drops_per_agent.back();
  agg.final_cum_drops_per_agent = mean_ci(column);
  for (std::size_t i = 0; i < runs.size(); ++i)
    column[i] = static_cast<double>(runs[i].c2_ack_drops);
  agg.c2_ack_drops = mean_ci(column);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    double sum = 0.0;
    for (double v : runs[i].c1_load) sum += v;
    column[i] = sum / static_cast<double>(runs[i].c1_load.size());
  }
  agg.mean_c1_load = mean_ci(column);
  return agg;
}

AggregateResult monte_carlo(const SimConfig& cfg, const PolicySpec& policy,
                            ObsModel model, ObsVariant variant,
                            const std::vector<std::uint64_t>& seeds,
                            const BatchOptions& opts) {
  return aggregate(run_batch(cfg, policy, model, variant, seeds, opts));
}

std::vector<double> default_grid(SweepKind kind) {
  switch (kind) {
    case SweepKind::Rate:
      return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    case SweepKind::Threshold:
      return {1, 2, 3, 4, 5, 6, 7, 8};
    case SweepKind::Agents:
      return {10, 100, 200, 500, 1000, 2000};
  }
  return {};
}

SweepResult sweep(SweepKind kind, const std::vector<double>& grid, const SimConfig& cfg,
                  const PolicySpec& policy, ObsModel model, ObsVariant variant,
                  std::uint64_t base_seed, int runs, const BatchOptions& opts) {
  if (grid.empty()) throw std::invalid_argument("sweep grid must be nonempty");
  SweepResult out;
  out.kind = kind;
  out.grid = grid;
  std::vector<std::uint64_t> seeds = seed_range(base_seed, runs);
  for (double g : grid) {
    SimConfig point_cfg = cfg;
    PolicySpec point_policy = policy;
    switch (kind) {
      case SweepKind::Rate: {
        if (!(g > 0.0) || g > 1.0) throw std::invalid_argument("rate grid values must be in (0, 1]");
        FixedPolicy fp{FixedPolicy::Kind::ConstantRate};
        fp.omega = g;
        point_policy = fp;
        break;
      }
      case SweepKind::Threshold: {
        if (!(g > 0.0)) throw std::invalid_argument("threshold grid values must be > 0");
        FixedPolicy fp{FixedPolicy::Kind::Threshold};
        fp.alpha = g;
        point_policy = fp;
        break;
      }
      case SweepKind::Agents: {
        double rounded = std::round(g);
        if (rounded < 1.0 || rounded != g)
          throw std::invalid_argument("agent grid values must be positive integers");
        point_cfg.n_agents = static_cast<int>(rounded);
        point_cfg.derive_paths();
        point_cfg.validate();
        break;
      }
    }
    out.results.push_back(monte_carlo(point_cfg, point_policy, model, variant, seeds, opts));
  }
  return out;
}

}  // namespace aoisim
