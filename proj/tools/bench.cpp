// Compares the serial reference batch runner against the OpenMP one on the
// same workload and verifies that both produce identical output.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aoisim/config.hpp"
#include "aoisim/monte_carlo.hpp"

using namespace aoisim;

namespace {

double wall_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

bool identical(const std::vector<EpisodeMetrics>& a, const std::vector<EpisodeMetrics>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].avg_age != b[i].avg_age) return false;
    if (a[i].cum_drops_per_agent != b[i].cum_drops_per_agent) return false;
    if (a[i].episode_return != b[i].episode_return) return false;
  }
  return true;
}

double time_batch(const SimConfig& cfg, const PolicySpec& policy, ObsVariant variant,
                  const std::vector<std::uint64_t>& seeds, bool parallel,
                  std::vector<EpisodeMetrics>& out) {
  BatchOptions opts;
  opts.parallel = parallel;
  double t0 = wall_seconds();
  out = run_batch(cfg, policy, ObsModel::Pomfc, variant, seeds, opts);
  return wall_seconds() - t0;
}

void bench_case(const char* name, const SimConfig& cfg, const PolicySpec& policy,
                ObsVariant variant, int runs) {
  std::vector<std::uint64_t> seeds = seed_range(cfg.seed, runs);
  std::vector<EpisodeMetrics> serial, parallel;
  double ts = time_batch(cfg, policy, variant, seeds, false, serial);
  double tp = time_batch(cfg, policy, variant, seeds, true, parallel);
  std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   identical %s\n",
              name, ts, tp, ts / tp, identical(serial, parallel) ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  int runs = argc > 1 ? std::stoi(argv[1]) : 64;
#ifdef _OPENMP
  std::printf("OpenMP threads: %d, runs per case: %d\n", omp_get_max_threads(), runs);
#else
  std::printf("built without OpenMP, runs per case: %d\n", runs);
#endif

  SimConfig cfg;
  cfg.n_agents = 100;
  cfg.derive_paths();

  FixedPolicy threshold{FixedPolicy::Kind::Threshold};
  threshold.alpha = 4.0;
  bench_case("threshold, true state", cfg, threshold, ObsVariant::TrueState, runs);

  FixedPolicy rate{FixedPolicy::Kind::ConstantRate};
  rate.omega = 0.5;
  bench_case("constant-rate, true state", cfg, rate, ObsVariant::TrueState, runs);

  UpperPolicy up;
  up.quant_levels = cfg.quant_levels;
  up.theta.assign(static_cast<std::size_t>(cfg.quant_levels), 0.0);
  bench_case("static policy, avg belief", cfg, up, ObsVariant::AvgBelief, runs / 4 + 1);

  return 0;
}
