#pragma once

#include <cstdint>
#include <string>

namespace aoisim {

// Experiment parameters. One instance is the single source of truth for a
// simulation run; `paths` is always derived as floor(kappa * n_agents).
//
// JSON schema (all keys optional, unknown keys rejected):
//   N        int     number of agents                      default 100
//   kappa    float   agents-to-paths ratio in (0,1]        default 0.5
//   lambda1  float   forward channel delay rate (1/time)   default 1.5
//   lambda2  float   reverse channel delay rate (1/time)   default 1.5
//   dt       float   decision epoch length                 default 1.0
//   T        int     training episode epochs               default 50
//   T_e      int     evaluation episode epochs             default 50
//   P        int     particles per agent                   default 100
//   S        int     Monte Carlo runs                      default 100
//   q        int     quantization levels (>= 2)            default 16
//   D        float   drop penalty per message (>= 0)       default 1.0
//   seed     uint64  master seed                           default 1
struct SimConfig {
  int n_agents = 100;
  double kappa = 0.5;
  int paths = 50;  // derived: floor(kappa * n_agents)
  double lambda1 = 1.5;
  double lambda2 = 1.5;
  double dt = 1.0;
  int train_epochs = 50;
  int eval_epochs = 50;
  int particles = 100;
  int mc_runs = 100;
  int quant_levels = 16;
  double drop_penalty = 1.0;
  std::uint64_t seed = 1;

  // Recomputes `paths` from kappa and n_agents.
  void derive_paths();

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  // Canonical key-sorted JSON; identical configs serialize identically.
  std::string canonical_json() const;

  // FNV-1a over the canonical form, used to stamp exported files.
  std::uint64_t fingerprint() const;
};

// Parses and validates a config document. Unknown keys are an error.
SimConfig build_config(const std::string& json_text);

SimConfig load_config_file(const std::string& path);

}  // namespace aoisim
