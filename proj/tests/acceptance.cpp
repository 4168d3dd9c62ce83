// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails. Criterion k draws its
// seeds from base 1000*k, fixed up front.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aoisim/belief.hpp"
#include "aoisim/config.hpp"
#include "aoisim/export.hpp"
#include "aoisim/monte_carlo.hpp"
#include "aoisim/policy_io.hpp"
#include "aoisim/receiver.hpp"
#include "aoisim/simulation.hpp"
#include "aoisim/trainer.hpp"

using namespace aoisim;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

SimConfig table_defaults(int agents) {
  SimConfig cfg;
  cfg.n_agents = agents;
  cfg.derive_paths();
  return cfg;
}

// ---------------------------------------------------------------------------
// 1. Determinism of evaluate output across repeats and parallelism levels.
void criterion_determinism() {
  SimConfig cfg = table_defaults(50);
  cfg.eval_epochs = 30;
  FixedPolicy fp{FixedPolicy::Kind::ConstantRate};
  fp.omega = 0.5;
  auto seeds = seed_range(1000, 20);

  auto render = [&](bool parallel, int threads) {
    BatchOptions opts;
    opts.parallel = parallel;
#ifdef _OPENMP
    omp_set_num_threads(threads);
#else
    (void)threads;
#endif
    AggregateResult agg =
        monte_carlo(cfg, fp, ObsModel::Pomfc, ObsVariant::TrueState, seeds, opts);
    return render_metrics(agg, cfg, 1000, ExportFormat::Csv);
  };

  std::string serial = render(false, 1);
  std::string repeat = render(false, 1);
  std::string one_thread = render(true, 1);
  std::string two_threads = render(true, 2);
#ifdef _OPENMP
  omp_set_num_threads(omp_get_num_procs());
#endif
  bool pass = serial == repeat && serial == one_thread && serial == two_threads;
  report(1, "byte-identical evaluate output", pass,
         pass ? "serial, repeated and 1/2-thread runs all match" : "outputs differ");
}

// ---------------------------------------------------------------------------
// 2. Receiver equals the direct age definition on randomized scripted traces.
void criterion_receiver_oracle() {
  struct Arrival {
    int agent;
    double send, arrival;
  };
  RngStream gen(derive_state(2000, StreamKind::Trainer));
  long checks = 0, bad = 0;
  for (int trace_id = 0; trace_id < 1000; ++trace_id) {
    int agents = 1 + static_cast<int>(gen.next_below(3));
    int count = 1 + static_cast<int>(gen.next_below(20));
    std::vector<Arrival> trace;
    for (int m = 0; m < count; ++m) {
      double send = gen.next_unit() * 30.0;
      trace.push_back({static_cast<int>(gen.next_below(static_cast<std::uint32_t>(agents))),
                       send, send + gen.next_exp(1.5)});
    }
    std::sort(trace.begin(), trace.end(),
              [](const Arrival& a, const Arrival& b) { return a.arrival < b.arrival; });
    Receiver rcv(agents);
    std::vector<int> next_index(static_cast<std::size_t>(agents), 1);
    auto oracle = [&](int n, double t) {
      double best = 0.0;
      for (const Arrival& a : trace)
        if (a.agent == n && a.arrival <= t) best = std::max(best, a.send);
      return t - best;
    };
    for (const Arrival& a : trace) {
      rcv.on_message({a.agent, next_index[static_cast<std::size_t>(a.agent)]++, a.send},
                     a.arrival);
      for (int n = 0; n < agents; ++n) {
        ++checks;
        if (rcv.true_age(n, a.arrival) != oracle(n, a.arrival)) ++bad;
      }
    }
    for (int k = 0; k < 5; ++k) {
      double t = 35.0 + gen.next_unit() * 10.0;
      for (int n = 0; n < agents; ++n) {
        ++checks;
        if (rcv.true_age(n, t) != oracle(n, t)) ++bad;
      }
    }
  }
  report(2, "receiver matches the brute-force age definition", bad == 0,
         std::to_string(checks) + " exact comparisons, " + std::to_string(bad) + " mismatches");
}

// ---------------------------------------------------------------------------
// 3. Filter exactness at observations, value over the ack-free fallback, and
//    end-of-horizon tracking.
void criterion_filter() {
  SimConfig cfg = table_defaults(100);
  FixedPolicy fp{FixedPolicy::Kind::Threshold};
  fp.alpha = 4.0;
  RunOptions opts;
  opts.maintain_filters = true;
  opts.collect_belief_error = true;
  opts.belief_error_substeps = 16;  // dense grid: the time average, not epoch samples
  opts.verify_reset_exactness = true;
  opts.snapshot_times = {49};

  std::int64_t violations = 0;
  double err_filter = 0.0, err_no_ack = 0.0;
  double belief_sum = 0.0, true_sum = 0.0;
  long samples = 0, end_samples = 0;
  for (int ep = 0; ep < 20; ++ep) {
    EpisodeMetrics m = run_episode(cfg, fp, ObsModel::Pomfc, ObsVariant::TrueState,
                                   3000 + static_cast<std::uint64_t>(ep), opts);
    violations += m.reset_exactness_violations;
    err_filter += m.abs_err_filter;
    err_no_ack += m.abs_err_no_ack;
    samples += m.belief_samples;
    for (const PopulationSnapshot& snap : m.snapshots) {
      for (std::size_t n = 0; n < snap.true_age.size(); ++n) {
        belief_sum += snap.belief_mean[n];
        true_sum += snap.true_age[n];
        ++end_samples;
      }
    }
  }
  double mean_filter = err_filter / static_cast<double>(samples);
  double mean_no_ack = err_no_ack / static_cast<double>(samples);
  report(3, "filter exactness and tracking",
         violations == 0 && mean_filter < mean_no_ack && end_samples == 20 * 100 &&
             std::abs(belief_sum - true_sum) / true_sum < 0.25,
         "0 reset violations expected, got " + std::to_string(violations) +
             "; |err| filter " + fmt(mean_filter) + " vs ack-free " + fmt(mean_no_ack) +
             "; t=49 belief/true mean " + fmt(belief_sum / end_samples) + "/" +
             fmt(true_sum / end_samples));
}

// ---------------------------------------------------------------------------
// 4. ConstantRate sweep shape at N=200, S=50.
void criterion_rate_sweep() {
  SimConfig cfg = table_defaults(200);
  std::vector<double> grid = default_grid(SweepKind::Rate);
  SweepResult sw = sweep(SweepKind::Rate, grid, cfg, FixedPolicy{}, ObsModel::Pomfc,
                         ObsVariant::TrueState, 4000, 50);
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (sw.results[i].time_avg_age.mean < sw.results[best].time_avg_age.mean) best = i;
  double at_half = sw.results[4].time_avg_age.mean;  // omega = 0.5
  double at_one = sw.results[9].time_avg_age.mean;   // omega = 1.0
  bool interior = grid[best] > 0.15 && grid[best] < 0.95;
  bool half_beats_one = at_half < at_one;
  report(4, "rate sweep has an interior optimum", interior && half_beats_one,
         "argmin omega=" + fmt(grid[best]) + "; aoi(0.5)=" + fmt(at_half) +
             " vs aoi(1.0)=" + fmt(at_one));
}

// ---------------------------------------------------------------------------
// 5. Threshold sweep shape at N=200, S=50.
void criterion_threshold_sweep() {
  SimConfig cfg = table_defaults(200);
  std::vector<double> grid = default_grid(SweepKind::Threshold);
  SweepResult sw = sweep(SweepKind::Threshold, grid, cfg, FixedPolicy{}, ObsModel::Pomfc,
                         ObsVariant::TrueState, 5000, 50);
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (sw.results[i].time_avg_age.mean < sw.results[best].time_avg_age.mean) best = i;
  double at_1 = sw.results[0].time_avg_age.mean;
  double at_4 = sw.results[3].time_avg_age.mean;
  double at_8 = sw.results[7].time_avg_age.mean;
  bool interior = grid[best] >= 2.0 && grid[best] <= 7.0;
  bool four_beats_ends = at_4 < std::min(at_1, at_8);
  report(5, "threshold sweep has an interior optimum", interior && four_beats_ends,
         "argmin alpha=" + fmt(grid[best]) + "; aoi(4)=" + fmt(at_4) + " vs aoi(1)=" +
             fmt(at_1) + ", aoi(8)=" + fmt(at_8));
}

// ---------------------------------------------------------------------------
// Shared state for criteria 6-9: one trained policy and the baseline grids.
struct TrainedSetup {
  UpperPolicy policy;
  double trained_aoi = 0.0;       // true-state execution, held-out seeds
  double best_baseline_aoi = 0.0;
  std::string best_baseline_name;
  std::vector<std::uint64_t> eval_seeds;
};

TrainedSetup train_and_bench() {
  TrainedSetup setup;
  SimConfig cfg = table_defaults(100);

  TrainConfig tc;
  tc.population = 48;
  tc.elite_fraction = 0.25;
  tc.iterations = 50;
  tc.episodes = 8;
  tc.init_std = 1.0;
  tc.seed = 6000;
  TrainedPolicy trained =
      train_policy(cfg, tc, UpperPolicy::Kind::Static, ObsModel::Pomfc, ObsVariant::TrueState);
  setup.policy = trained.policy;

  setup.eval_seeds = seed_range(6500, 100);
  setup.trained_aoi = monte_carlo(cfg, setup.policy, ObsModel::Pomfc, ObsVariant::TrueState,
                                  setup.eval_seeds)
                          .time_avg_age.mean;

  setup.best_baseline_aoi = 1e30;
  for (double omega : default_grid(SweepKind::Rate)) {
    FixedPolicy fp{FixedPolicy::Kind::ConstantRate};
    fp.omega = omega;
    double aoi = monte_carlo(cfg, fp, ObsModel::Pomfc, ObsVariant::TrueState, setup.eval_seeds)
                     .time_avg_age.mean;
    if (aoi < setup.best_baseline_aoi) {
      setup.best_baseline_aoi = aoi;
      setup.best_baseline_name = "constant-rate=" + fmt(omega);
    }
  }
  for (double alpha : default_grid(SweepKind::Threshold)) {
    FixedPolicy fp{FixedPolicy::Kind::Threshold};
    fp.alpha = alpha;
    double aoi = monte_carlo(cfg, fp, ObsModel::Pomfc, ObsVariant::TrueState, setup.eval_seeds)
                     .time_avg_age.mean;
    if (aoi < setup.best_baseline_aoi) {
      setup.best_baseline_aoi = aoi;
      setup.best_baseline_name = "threshold=" + fmt(alpha);
    }
  }
  return setup;
}

// 6. Trained policy vs the best fixed baseline on held-out seeds.
void criterion_training(const TrainedSetup& setup) {
  bool pass = setup.trained_aoi <= 1.05 * setup.best_baseline_aoi;
  report(6, "trained policy within 5% of the best fixed baseline", pass,
         "trained " + fmt(setup.trained_aoi) + " vs best baseline " +
             setup.best_baseline_name + " " + fmt(setup.best_baseline_aoi));
}

// 7. The same trained policy executed on beliefs instead of true state.
void criterion_belief_execution(const TrainedSetup& setup) {
  SimConfig cfg = table_defaults(100);
  double belief_aoi = monte_carlo(cfg, setup.policy, ObsModel::Pomfc, ObsVariant::AvgBelief,
                                  setup.eval_seeds)
                          .time_avg_age.mean;
  double degradation = belief_aoi / setup.trained_aoi - 1.0;
  report(7, "belief-driven execution degrades at most 15%", degradation <= 0.15,
         "true-state " + fmt(setup.trained_aoi) + ", avg-belief " + fmt(belief_aoi) +
             ", degradation " + fmt(100.0 * degradation) + "%");
}

// 8. Mean-field scalability of the trained policy.
void criterion_scalability(const TrainedSetup& setup) {
  SimConfig cfg = table_defaults(100);
  auto seeds = seed_range(8000, 50);
  double reference = monte_carlo(cfg, setup.policy, ObsModel::Pomfc, ObsVariant::TrueState,
                                 seeds)
                         .time_avg_age.mean;
  bool pass = true;
  std::string detail = "N=100: " + fmt(reference);
  for (int agents : {10, 500, 2000}) {
    SimConfig scaled = table_defaults(agents);
    double aoi = monte_carlo(scaled, setup.policy, ObsModel::Pomfc, ObsVariant::TrueState,
                             seeds)
                     .time_avg_age.mean;
    double rel = std::abs(aoi - reference) / reference;
    pass = pass && rel <= 0.15;
    detail += ", N=" + std::to_string(agents) + ": " + fmt(aoi);
  }
  report(8, "trained policy scales across population sizes", pass, detail);
}

// 9. Drop behavior of the trained policy against always-send.
void criterion_drops(const TrainedSetup& setup) {
  SimConfig cfg = table_defaults(100);
  auto seeds = seed_range(9000, 50);
  double trained = monte_carlo(cfg, setup.policy, ObsModel::Pomfc, ObsVariant::TrueState,
                               seeds)
                       .final_cum_drops_per_agent.mean;
  double always = monte_carlo(cfg, FixedPolicy{FixedPolicy::Kind::AlwaysSend},
                              ObsModel::Pomfc, ObsVariant::TrueState, seeds)
                      .final_cum_drops_per_agent.mean;
  report(9, "trained policy drops strictly fewer messages than always-send",
         trained < always,
         "cumulative drops/agent: trained " + fmt(trained) + " vs always-send " + fmt(always));
}

// ---------------------------------------------------------------------------
// 10. Statistical components: sampler KS test, rate MLE concentration,
//     admission uniformity.
void criterion_statistics() {
  // Kolmogorov-Smirnov against Exp(1.5), alpha = 0.01.
  const int n = 100'000;
  RngStream s(derive_state(10'000, StreamKind::ForwardDelay));
  std::vector<double> xs(n);
  for (double& x : xs) x = s.next_exp(1.5);
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    double f = 1.0 - std::exp(-1.5 * xs[static_cast<std::size_t>(i)]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  bool ks_ok = d < 1.6276 / std::sqrt(static_cast<double>(n));

  // MLE of the reverse rate: within 5% of 1.5 in at least 99% of runs.
  int reps = 300, within = 0;
  for (int rep = 0; rep < reps; ++rep) {
    RngStream rs(derive_state(10'000 + static_cast<std::uint64_t>(rep), StreamKind::ReverseDelay));
    DelayEstimate est;
    for (int i = 0; i < 10'000; ++i) est.add(rs.next_exp(1.5));
    if (std::abs(*estimate_rate(est) - 1.5) / 1.5 < 0.05) ++within;
  }
  bool mle_ok = within >= static_cast<int>(std::ceil(0.99 * reps));

  // Admission uniformity: 2 free paths among 3 candidates.
  int counts[3] = {0, 0, 0};
  const int trials = 10'000;
  for (int t = 0; t < trials; ++t) {
    ChannelState ch(2);
    RngStream lottery(derive_state(10'000 + static_cast<std::uint64_t>(t), StreamKind::Admission));
    DelaySampler delays(RngStream(derive_state(static_cast<std::uint64_t>(t), StreamKind::ForwardDelay)));
    std::vector<Message> incoming = {{0, 1, 0.0}, {1, 1, 0.0}, {2, 1, 0.0}};
    EpochAdmission r = admit_epoch(ch, incoming, 0.0, 1.5, lottery, delays);
    int excluded = r.dropped.front().agent;
    ++counts[excluded];
  }
  bool admission_ok = true;
  for (int c : counts)
    admission_ok = admission_ok &&
                   std::abs(c / static_cast<double>(trials) - 1.0 / 3.0) < 0.02;

  report(10, "statistical components", ks_ok && mle_ok && admission_ok,
         "KS d=" + fmt(d) + "; MLE within 5% in " + std::to_string(within) + "/" +
             std::to_string(reps) + "; admission pair frequencies balanced: " +
             (admission_ok ? "yes" : "no"));
}

// ---------------------------------------------------------------------------
// 11. Optimizer sanity on a known quadratic.
void criterion_trainer_sanity() {
  const int dim = 16;
  std::vector<double> target(dim);
  for (int d = 0; d < dim; ++d) target[static_cast<std::size_t>(d)] = 0.25 * d - 2.0;
  auto objective = [&](std::span<const double> theta) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
      double diff = theta[static_cast<std::size_t>(d)] - target[static_cast<std::size_t>(d)];
      s += diff * diff;
    }
    return -s;
  };
  TrainConfig tc;
  tc.population = 64;
  tc.elite_fraction = 0.25;
  tc.iterations = 50;
  tc.seed = 11'000;
  CemOutcome out = cem_maximize(tc, dim, objective);
  double err = 0.0;
  for (int d = 0; d < dim; ++d)
    err = std::max(err, std::abs(out.best_params[static_cast<std::size_t>(d)] -
                                 target[static_cast<std::size_t>(d)]));
  report(11, "optimizer recovers a known quadratic optimum", err < 0.1,
         "max parameter error " + fmt(err) + " after " +
             std::to_string(out.log.rows.size()) + " iterations");
}

}  // namespace

int main() {
  criterion_determinism();
  criterion_receiver_oracle();
  criterion_filter();
  criterion_rate_sweep();
  criterion_threshold_sweep();
  TrainedSetup setup = train_and_bench();
  criterion_training(setup);
  criterion_belief_execution(setup);
  criterion_scalability(setup);
  criterion_drops(setup);
  criterion_statistics();
  criterion_trainer_sanity();

  std::printf("%d of 11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
