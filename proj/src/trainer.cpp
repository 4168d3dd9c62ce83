#include "aoisim/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "aoisim/export.hpp"
#include "aoisim/rng.hpp"
#include "aoisim/simulation.hpp"

namespace aoisim {

int TrainConfig::elite_count() const {
  int k = static_cast<int>(std::floor(elite_fraction * static_cast<double>(population)));
  return std::max(1, k);
}

void TrainConfig::validate() const {
  if (population < 4) throw std::invalid_argument("population must be >= 4");
  if (!(elite_fraction > 0.0) || elite_fraction >= 1.0)
    throw std::invalid_argument("elite_fraction must be in (0, 1)");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (!(init_std > 0.0)) throw std::invalid_argument("init_std must be > 0");
  if (std_floor < 0.0) throw std::invalid_argument("std_floor must be >= 0");
  if (exploration_noise < 0.0)
    throw std::invalid_argument("exploration_noise must be >= 0");
}

CemOutcome cem_maximize(const TrainConfig& tc, int dim,
                        const std::function<double(std::span<const double>)>& objective,
                        bool parallel) {
  tc.validate();
  if (dim < 1) throw std::invalid_argument("parameter dimension must be >= 1");

  RngStreams streams{tc.seed};
  RngStream gauss = streams.trainer();
  std::vector<double> mu(static_cast<std::size_t>(dim), tc.init_mean);
  std::vector<double> sigma(static_cast<std::size_t>(dim), tc.init_std);

  CemOutcome out;
  bool have_best = false;
  const int pop = tc.population;
  const int elites = tc.elite_count();

  for (int iter = 0; iter < tc.iterations; ++iter) {
    std::vector<std::vector<double>> cand(static_cast<std::size_t>(pop));
    for (int c = 0; c < pop; ++c) {
      auto& theta = cand[static_cast<std::size_t>(c)];
      theta.resize(static_cast<std::size_t>(dim));
      for (int d = 0; d < dim; ++d)
        theta[static_cast<std::size_t>(d)] =
            mu[static_cast<std::size_t>(d)] +
            sigma[static_cast<std::size_t>(d)] * gauss.next_gauss();
    }

    std::vector<double> value(static_cast<std::size_t>(pop), 0.0);
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
      for (int c = 0; c < pop; ++c)
        value[static_cast<std::size_t>(c)] = objective(cand[static_cast<std::size_t>(c)]);
    } else {
      for (int c = 0; c < pop; ++c)
        value[static_cast<std::size_t>(c)] = objective(cand[static_cast<std::size_t>(c)]);
    }
    for (int c = 0; c < pop; ++c)
      if (!std::isfinite(value[static_cast<std::size_t>(c)]))
        throw std::runtime_error("non-finite objective at iteration " + std::to_string(iter) +
                                 ", candidate " + std::to_string(c));

    // Rank candidates plus the incumbent; the refit set keeps the best seen.
    std::vector<int> order(static_cast<std::size_t>(pop));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return value[static_cast<std::size_t>(a)] > value[static_cast<std::size_t>(b)];
    });

    std::vector<const std::vector<double>*> refit;
    for (int k = 0; k < elites && k < pop; ++k)
      refit.push_back(&cand[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])]);
    if (have_best) refit.push_back(&out.best_params);

    double iter_best = value[static_cast<std::size_t>(order.front())];
    if (!have_best || iter_best > out.best_value) {
      out.best_value = iter_best;
      out.best_params = cand[static_cast<std::size_t>(order.front())];
      have_best = true;
    }

    double noise = tc.exploration_noise * tc.init_std *
                   std::max(0.0, 1.0 - 2.0 * iter / static_cast<double>(tc.iterations));
    for (int d = 0; d < dim; ++d) {
      double sum = 0.0, sum2 = 0.0;
      for (const auto* theta : refit) {
        double v = (*theta)[static_cast<std::size_t>(d)];
        sum += v;
        sum2 += v * v;
      }
      double n = static_cast<double>(refit.size());
      double m = sum / n;
      double sd = std::sqrt(std::max(0.0, sum2 / n - m * m));
      mu[static_cast<std::size_t>(d)] = m;
      sigma[static_cast<std::size_t>(d)] = std::max(tc.std_floor, sd + noise);
    }

    double mean_value = std::accumulate(value.begin(), value.end(), 0.0) /
                        static_cast<double>(pop);
    double std_norm = 0.0;
    for (double s : sigma) std_norm += s * s;
    out.log.rows.push_back({iter, out.best_value, mean_value, std::sqrt(std_norm)});
  }
  return out;
}

TrainedPolicy train_policy(const SimConfig& cfg, const TrainConfig& tc,
                           UpperPolicy::Kind kind, ObsModel model, ObsVariant variant,
                           bool parallel) {
  cfg.validate();
  const int q = cfg.quant_levels;
  const int obs_dim = observation_dim(model, cfg.n_agents, cfg.particles);
  const int dim = kind == UpperPolicy::Kind::Static ? q : q * (obs_dim + 1);

  auto make_policy = [&](std::span<const double> params) {
    UpperPolicy up;
    up.kind = kind;
    up.quant_levels = q;
    if (kind == UpperPolicy::Kind::Static) {
      up.theta.assign(params.begin(), params.end());
    } else {
      up.obs_dim = obs_dim;
      up.weights.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(q) * obs_dim);
      up.bias.assign(params.begin() + static_cast<std::ptrdiff_t>(q) * obs_dim, params.end());
    }
    return up;
  };

  // Common random numbers: one fixed seed set shared by all candidates in
  // all iterations, so comparisons and the logged best stay consistent.
  std::vector<std::uint64_t> seeds;
  for (int e = 0; e < tc.episodes; ++e)
    seeds.push_back(derive_state(tc.seed, StreamKind::Trainer, 0xe91, static_cast<std::uint64_t>(e)));

  auto objective = [&](std::span<const double> params) {
    UpperPolicy up = make_policy(params);
    PolicySpec spec = up;
    double total = 0.0;
    for (std::uint64_t s : seeds)
      total += episode_return(cfg, spec, model, variant, s);
    return total / static_cast<double>(tc.episodes);
  };

  CemOutcome cem = cem_maximize(tc, dim, objective, parallel);
  TrainedPolicy out;
  out.policy = make_policy(cem.best_params);
  out.log = std::move(cem.log);
  out.best_return = cem.best_value;
  return out;
}

std::string train_log_csv(const TrainLog& log) {
  std::string s = "iteration,best_return,mean_return,param_std_norm\n";
  for (const TrainLog::Row& r : log.rows) {
    s += std::to_string(r.iteration);
    s += ',';
    s += format_g17(r.best);
    s += ',';
    s += format_g17(r.mean);
    s += ',';
    s += format_g17(r.std_norm);
    s += '\n';
  }
  return s;
}

}  // namespace aoisim
