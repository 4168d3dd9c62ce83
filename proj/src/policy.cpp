#include "aoisim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aoisim {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct MeanSd {
  double mean, sd;
};

template <typename T>
MeanSd population_stats(const std::vector<T>& xs) {
  double sum = 0.0, sum2 = 0.0;
  for (T x : xs) {
    double v = static_cast<double>(x);
    sum += v;
    sum2 += v * v;
  }
  double n = static_cast<double>(xs.size());
  double mean = sum / n;
  return {mean, std::sqrt(std::max(0.0, sum2 / n - mean * mean))};
}

}  // namespace

std::string to_string(ObsModel m) {
  switch (m) {
    case ObsModel::Pomfc: return "pomfc";
    case ObsModel::NAgent: return "na";
    case ObsModel::NAgentDec: return "na-dec";
    case ObsModel::NAgentDecParticles: return "na-dec-particles";
  }
  return "?";
}

std::string to_string(ObsVariant v) {
  return v == ObsVariant::TrueState ? "true-state" : "avg-belief";
}

ObsModel parse_obs_model(const std::string& s) {
  if (s == "pomfc") return ObsModel::Pomfc;
  if (s == "na") return ObsModel::NAgent;
  if (s == "na-dec") return ObsModel::NAgentDec;
  if (s == "na-dec-particles") return ObsModel::NAgentDecParticles;
  throw std::invalid_argument("unknown observation model: " + s);
}

ObsVariant parse_obs_variant(const std::string& s) {
  if (s == "true-state") return ObsVariant::TrueState;
  if (s == "avg-belief") return ObsVariant::AvgBelief;
  throw std::invalid_argument("unknown observation variant: " + s);
}

int observation_dim(ObsModel model, int n_agents, int particles) {
  switch (model) {
    case ObsModel::Pomfc: return 7;
    case ObsModel::NAgent: return n_agents;
    case ObsModel::NAgentDec: return 3 * n_agents;
    case ObsModel::NAgentDecParticles: return n_agents * (particles + 2);
  }
  return 0;
}

std::vector<double> build_observation(ObsModel model, ObsVariant variant,
                                      const SystemSnapshot& snap) {
  const std::size_t n = snap.true_age.size();
  if (snap.unacked.size() != n || snap.msgs_in_c1.size() != n || snap.acks_in_c2.size() != n)
    throw std::invalid_argument("snapshot dimensions disagree");
  const bool belief = variant == ObsVariant::AvgBelief || model == ObsModel::NAgentDecParticles;
  if (belief && snap.belief_mean.size() != n)
    throw std::invalid_argument("snapshot lacks belief statistics");

  const std::vector<double>& age = belief ? snap.belief_mean : snap.true_age;

  std::vector<double> o;
  switch (model) {
    case ObsModel::Pomfc: {
      o.reserve(7);
      auto a = population_stats(age);
      if (variant == ObsVariant::TrueState) {
        auto m1 = population_stats(snap.msgs_in_c1);
        auto m2 = population_stats(snap.acks_in_c2);
        o = {a.mean, m1.mean, m2.mean, a.sd, m1.sd, m2.sd, snap.channel_load};
      } else {
        // Agents cannot split their unacknowledged count across channels;
        // both slot pairs carry the u statistics to keep the layout stable.
        auto u = population_stats(snap.unacked);
        auto load = population_stats(snap.last_observed_load);
        o = {a.mean, u.mean, u.mean, a.sd, u.sd, u.sd, load.mean};
      }
      break;
    }
    case ObsModel::NAgent:
      o = age;
      break;
    case ObsModel::NAgentDec: {
      o.reserve(3 * n);
      for (std::size_t i = 0; i < n; ++i) {
        o.push_back(age[i]);
        o.push_back(static_cast<double>(snap.unacked[i]));
        o.push_back(variant == ObsVariant::TrueState ? snap.channel_load
                                                     : snap.last_observed_load[i]);
      }
      break;
    }
    case ObsModel::NAgentDecParticles: {
      if (snap.particle_values.size() != n)
        throw std::invalid_argument("snapshot lacks particle values");
      for (std::size_t i = 0; i < n; ++i) {
        o.insert(o.end(), snap.particle_values[i].begin(), snap.particle_values[i].end());
        o.push_back(static_cast<double>(snap.unacked[i]));
        o.push_back(snap.last_observed_load[i]);
      }
      break;
    }
  }
  return o;
}

DecisionRule evaluate_upper(const UpperPolicy& policy, std::span<const double> obs) {
  DecisionRule rule;
  rule.send_prob.resize(static_cast<std::size_t>(policy.quant_levels));
  if (policy.kind == UpperPolicy::Kind::Static) {
    if (policy.theta.size() != rule.send_prob.size())
      throw std::invalid_argument("static policy parameter count must equal q");
    for (std::size_t i = 0; i < rule.send_prob.size(); ++i)
      rule.send_prob[i] = sigmoid(policy.theta[i]);
  } else {
    if (static_cast<int>(obs.size()) != policy.obs_dim)
      throw std::invalid_argument("observation dimension mismatch: policy expects " +
                                  std::to_string(policy.obs_dim) + ", got " +
                                  std::to_string(obs.size()));
    if (policy.weights.size() !=
            static_cast<std::size_t>(policy.quant_levels) * static_cast<std::size_t>(policy.obs_dim) ||
        policy.bias.size() != static_cast<std::size_t>(policy.quant_levels))
      throw std::invalid_argument("linear policy parameter shapes are inconsistent");
    for (int i = 0; i < policy.quant_levels; ++i) {
      double z = policy.bias[static_cast<std::size_t>(i)];
      const double* row = policy.weights.data() +
                          static_cast<std::size_t>(i) * static_cast<std::size_t>(policy.obs_dim);
      for (int k = 0; k < policy.obs_dim; ++k) z += row[k] * obs[static_cast<std::size_t>(k)];
      rule.send_prob[static_cast<std::size_t>(i)] = sigmoid(z);
    }
  }
  return rule;
}

int act(const DecisionRule& rule, int level, RngStream& stream) {
  if (level < 0 || level >= static_cast<int>(rule.send_prob.size()))
    throw std::invalid_argument("quantization level out of range");
  return stream.bernoulli(rule.send_prob[static_cast<std::size_t>(level)]) ? 1 : 0;
}

std::vector<std::uint8_t> fixed_actions(const FixedPolicy& policy,
                                        std::span<const double> true_age,
                                        RngStream& select_stream) {
  const std::size_t n = true_age.size();
  std::vector<std::uint8_t> a(n, 0);
  switch (policy.kind) {
    case FixedPolicy::Kind::AlwaysSend:
      std::fill(a.begin(), a.end(), std::uint8_t{1});
      break;
    case FixedPolicy::Kind::ConstantRate: {
      long count = std::lround(policy.omega * static_cast<double>(n));
      count = std::clamp(count, 0l, static_cast<long>(n));
      std::vector<std::uint32_t> idx(n);
      std::iota(idx.begin(), idx.end(), 0u);
      for (std::size_t i = n; i > 1; --i) {
        std::size_t j = select_stream.next_below(static_cast<std::uint32_t>(i));
        std::swap(idx[i - 1], idx[j]);
      }
      for (long k = 0; k < count; ++k) a[idx[static_cast<std::size_t>(k)]] = 1;
      break;
    }
    case FixedPolicy::Kind::Threshold:
      for (std::size_t i = 0; i < n; ++i) a[i] = true_age[i] > policy.alpha ? 1 : 0;
      break;
  }
  return a;
}

double reward(std::span<const double> true_age, std::int64_t drops_this_epoch,
              double drop_penalty) {
  double sum = 0.0;
  for (double x : true_age) sum += x;
  double n = static_cast<double>(true_age.size());
  return -sum / n - drop_penalty * static_cast<double>(drops_this_epoch) / n;
}

}  // namespace aoisim
