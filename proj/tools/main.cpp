#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aoisim/config.hpp"
#include "aoisim/export.hpp"
#include "aoisim/monte_carlo.hpp"
#include "aoisim/policy_io.hpp"
#include "aoisim/simulation.hpp"
#include "aoisim/trainer.hpp"

namespace {

using namespace aoisim;

struct CommonArgs {
  std::string config_path;
  std::string policy_arg = "always-send";
  std::string model = "pomfc";
  std::string variant = "true-state";
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::string out_path;
  std::string format = "csv";
  bool serial = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_policy = true) {
  cmd->add_option("--config", args.config_path, "config file (JSON)");
  if (with_policy)
    cmd->add_option("--policy", args.policy_arg,
                    "policy file or inline form (always-send, constant-rate=0.5, threshold=4)");
  cmd->add_option("--model", args.model, "pomfc | na | na-dec | na-dec-particles");
  cmd->add_option("--variant", args.variant, "true-state | avg-belief");
  cmd->add_option("--seed", args.seed, "base seed override");
  cmd->add_option("--runs", args.runs, "Monte Carlo runs override");
  cmd->add_option("--out", args.out_path, "output path (stdout if omitted)");
  cmd->add_option("--format", args.format, "csv | doc");
  cmd->add_flag("--serial", args.serial, "disable parallel execution");
}

SimConfig make_config(const CommonArgs& args) {
  SimConfig cfg = args.config_path.empty() ? SimConfig{} : load_config_file(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.runs) cfg.mc_runs = *args.runs;
  cfg.validate();
  return cfg;
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file(out_path, content);
}

int run_evaluate(const CommonArgs& args, int runs) {
  SimConfig cfg = make_config(args);
  PolicySpec policy = resolve_policy_arg(args.policy_arg);
  ObsModel model = parse_obs_model(args.model);
  ObsVariant variant = parse_obs_variant(args.variant);
  BatchOptions opts;
  opts.parallel = !args.serial;
  AggregateResult agg =
      monte_carlo(cfg, policy, model, variant, seed_range(cfg.seed, runs), opts);
  emit(render_metrics(agg, cfg, cfg.seed, parse_format(args.format)), args.out_path);
  return 0;
}

int run_sweep(const CommonArgs& args, SweepKind kind, const std::vector<double>& grid_arg) {
  SimConfig cfg = make_config(args);
  PolicySpec policy = resolve_policy_arg(args.policy_arg);
  ObsModel model = parse_obs_model(args.model);
  ObsVariant variant = parse_obs_variant(args.variant);
  BatchOptions opts;
  opts.parallel = !args.serial;
  std::vector<double> grid = grid_arg.empty() ? default_grid(kind) : grid_arg;
  SweepResult sw = sweep(kind, grid, cfg, policy, model, variant, cfg.seed, cfg.mc_runs, opts);
  emit(render_sweep(sw, cfg, cfg.seed, parse_format(args.format)), args.out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized age-of-information simulator and policy laboratory"};
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<double> grid;
  int trace_agent = 0;
  std::string hist_path;
  std::vector<double> snapshot_times = {5, 10, 20, 30, 40, 49};
  TrainConfig tc;
  std::string policy_kind = "static";
  std::string log_path;

  CLI::App* simulate = app.add_subcommand("simulate", "run one episode and emit its metrics");
  add_common(simulate, args);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Monte Carlo evaluation with confidence intervals");
  add_common(evaluate, args);

  CLI::App* sweep_rate = app.add_subcommand("sweep-rate", "ConstantRate sweep over omega");
  add_common(sweep_rate, args, false);
  sweep_rate->add_option("--grid", grid, "omega values (default 0.1..1.0)");

  CLI::App* sweep_threshold = app.add_subcommand("sweep-threshold", "Threshold sweep over alpha");
  add_common(sweep_threshold, args, false);
  sweep_threshold->add_option("--grid", grid, "alpha values (default 1..8)");

  CLI::App* sweep_agents = app.add_subcommand("sweep-agents", "population sweep over N");
  add_common(sweep_agents, args);
  sweep_agents->add_option("--grid", grid, "N values (default 10,100,200,500,1000,2000)");

  CLI::App* train = app.add_subcommand("train", "cross-entropy policy search");
  add_common(train, args, false);
  train->add_option("--policy-kind", policy_kind, "static | linear");
  train->add_option("--population", tc.population, "candidates per iteration");
  train->add_option("--elite-frac", tc.elite_fraction, "elite fraction");
  train->add_option("--iterations", tc.iterations, "iterations");
  train->add_option("--episodes", tc.episodes, "episodes per candidate");
  train->add_option("--init-std", tc.init_std, "initial sampling std");
  train->add_option("--log", log_path, "training log CSV path");

  CLI::App* filter_trace = app.add_subcommand("filter-trace", "belief trace for one agent");
  add_common(filter_trace, args);
  filter_trace->add_option("--agent", trace_agent, "agent index");
  filter_trace->add_option("--hist", hist_path, "population snapshot CSV path");
  filter_trace->add_option("--snapshots", snapshot_times, "snapshot times");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_evaluate(args, 1);
    if (evaluate->parsed()) {
      SimConfig cfg = make_config(args);
      return run_evaluate(args, cfg.mc_runs);
    }
    if (sweep_rate->parsed()) return run_sweep(args, SweepKind::Rate, grid);
    if (sweep_threshold->parsed()) return run_sweep(args, SweepKind::Threshold, grid);
    if (sweep_agents->parsed()) return run_sweep(args, SweepKind::Agents, grid);
    if (train->parsed()) {
      SimConfig cfg = make_config(args);
      tc.seed = cfg.seed;
      UpperPolicy::Kind kind;
      if (policy_kind == "static")
        kind = UpperPolicy::Kind::Static;
      else if (policy_kind == "linear")
        kind = UpperPolicy::Kind::LinearConditioned;
      else
        throw std::invalid_argument("unknown policy kind: " + policy_kind);
      TrainedPolicy trained =
          train_policy(cfg, tc, kind, parse_obs_model(args.model),
                       parse_obs_variant(args.variant), !args.serial);
      if (args.out_path.empty())
        std::cout << policy_to_json(trained.policy);
      else
        save_policy(trained.policy, args.out_path);
      if (!log_path.empty()) write_file(log_path, train_log_csv(trained.log));
      std::cerr << "best training return: " << trained.best_return << "\n";
      return 0;
    }
    if (filter_trace->parsed()) {
      SimConfig cfg = make_config(args);
      PolicySpec policy = resolve_policy_arg(args.policy_arg);
      RunOptions opts;
      opts.trace_agent = trace_agent;
      opts.maintain_filters = true;
      opts.snapshot_times = snapshot_times;
      EpisodeMetrics m = run_episode(cfg, policy, parse_obs_model(args.model),
                                     parse_obs_variant(args.variant), cfg.seed, opts);
      emit(render_trace(m, cfg, cfg.seed, trace_agent, parse_format(args.format)),
           args.out_path);
      if (!hist_path.empty()) write_file(hist_path, render_snapshots(m, cfg, cfg.seed));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
