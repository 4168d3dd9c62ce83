#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "aoisim/rng.hpp"

namespace aoisim {

// Lower-level policy: one send probability per quantization level.
struct DecisionRule {
  std::vector<double> send_prob;
};

// Parametric map from a mean-field observation to a decision rule.
// Static ignores the observation; LinearConditioned applies
// sigmoid(W * obs + b) row by row.
struct UpperPolicy {
  enum class Kind { Static, LinearConditioned };
  Kind kind = Kind::Static;
  int quant_levels = 16;
  int obs_dim = 0;                // LinearConditioned only
  std::vector<double> theta;      // Static: size q
  std::vector<double> weights;    // LinearConditioned: q x obs_dim, row-major
  std::vector<double> bias;       // LinearConditioned: size q
};

struct FixedPolicy {
  enum class Kind { ConstantRate, AlwaysSend, Threshold };
  Kind kind = Kind::AlwaysSend;
  double omega = 0.5;  // ConstantRate: fraction of agents sending each epoch
  double alpha = 4.0;  // Threshold: send while the true age exceeds alpha
};

using PolicySpec = std::variant<UpperPolicy, FixedPolicy>;

// Observation models and the information variants they run under.
enum class ObsModel { Pomfc, NAgent, NAgentDec, NAgentDecParticles };
enum class ObsVariant { TrueState, AvgBelief };

std::string to_string(ObsModel m);
std::string to_string(ObsVariant v);
ObsModel parse_obs_model(const std::string& s);
ObsVariant parse_obs_variant(const std::string& s);

// Everything an observation builder may need. Belief fields are filled only
// when the run maintains particle filters; particle_values only for the
// particles model.
struct SystemSnapshot {
  std::vector<double> true_age;               // x_n
  std::vector<int> msgs_in_c1;                // M1_n
  std::vector<int> acks_in_c2;                // M2_n
  std::vector<int> unacked;                   // u_n
  std::vector<double> last_observed_load;     // per-agent, refreshed on send
  double channel_load = 0.0;                  // nu_1
  std::vector<double> belief_mean;            // mu_{n,P}
  std::vector<double> belief_std;             // sigma_{n,P}
  std::vector<std::vector<double>> particle_values;  // x_{n,p}
};

// Observation layouts (documented contract):
//   pomfc/true-state:  (mu(x), mu(M1), mu(M2), sd(x), sd(M1), sd(M2), nu1),
//                      always 7 entries, population standard deviations.
//   pomfc/avg-belief:  means/stds over per-agent belief means; the M1/M2
//                      slots both carry (mu(u), sd(u)); nu1 is the mean of
//                      the agents' last observed loads.
//   na:                (x_n) per agent (belief mean under avg-belief).
//   na-dec:            (x_n, u_n, nu) triples per agent; nu is the global
//                      load under true-state, the agent's last observed load
//                      under avg-belief.
//   na-dec-particles:  (x_{n,1..P}, u_n, last observed load_n) per agent;
//                      belief-based by construction (avg-belief only).
std::vector<double> build_observation(ObsModel model, ObsVariant variant,
                                      const SystemSnapshot& snap);

// Observation length for a given config; particles model needs P.
int observation_dim(ObsModel model, int n_agents, int particles);

// Deterministic map from observation to decision rule.
DecisionRule evaluate_upper(const UpperPolicy& policy, std::span<const double> obs);

// One Bernoulli action draw from the caller's stream.
int act(const DecisionRule& rule, int level, RngStream& stream);

// Global per-epoch action selection for the fixed baselines. ConstantRate
// picks exactly round(omega*N) distinct agents; Threshold compares the true
// age; AlwaysSend is all ones.
std::vector<std::uint8_t> fixed_actions(const FixedPolicy& policy,
                                        std::span<const double> true_age,
                                        RngStream& select_stream);

// Per-epoch team reward: -(mean age) - D * drops / N.
double reward(std::span<const double> true_age, std::int64_t drops_this_epoch,
              double drop_penalty);

}  // namespace aoisim
