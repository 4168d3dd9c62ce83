#include "aoisim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace aoisim {

void SimConfig::derive_paths() {
  paths = static_cast<int>(std::floor(kappa * static_cast<double>(n_agents)));
}

void SimConfig::validate() const {
  if (n_agents < 1) throw std::invalid_argument("N must be >= 1");
  if (!(kappa > 0.0) || kappa > 1.0)
    throw std::invalid_argument("kappa must be in (0, 1]");
  if (paths < 1)
    throw std::invalid_argument("floor(kappa*N) must be >= 1");
  if (!(lambda1 > 0.0)) throw std::invalid_argument("lambda1 must be > 0");
  if (!(lambda2 > 0.0)) throw std::invalid_argument("lambda2 must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (train_epochs < 1) throw std::invalid_argument("T must be >= 1");
  if (eval_epochs < 1) throw std::invalid_argument("T_e must be >= 1");
  if (particles < 1) throw std::invalid_argument("P must be >= 1");
  if (mc_runs < 1) throw std::invalid_argument("S must be >= 1");
  if (quant_levels < 2) throw std::invalid_argument("q must be >= 2");
  if (drop_penalty < 0.0) throw std::invalid_argument("D must be >= 0");
}

std::string SimConfig::canonical_json() const {
  nlohmann::json j;
  j["N"] = n_agents;
  j["kappa"] = kappa;
  j["lambda1"] = lambda1;
  j["lambda2"] = lambda2;
  j["dt"] = dt;
  j["T"] = train_epochs;
  j["T_e"] = eval_epochs;
  j["P"] = particles;
  j["S"] = mc_runs;
  j["q"] = quant_levels;
  j["D"] = drop_penalty;
  j["seed"] = seed;
  return j.dump();  // nlohmann objects are key-sorted
}

std::uint64_t SimConfig::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical_json()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

SimConfig build_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

  static const std::set<std::string> known = {"N",   "kappa", "lambda1", "lambda2",
                                              "dt",  "T",     "T_e",     "P",
                                              "S",   "q",     "D",       "seed"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key()))
      throw std::invalid_argument("unknown config key: " + it.key());
  }

  SimConfig cfg;
  auto get_int = [&](const char* key, int& out) {
    if (j.contains(key)) {
      if (!j[key].is_number_integer())
        throw std::invalid_argument(std::string(key) + " must be an integer");
      out = j[key].get<int>();
    }
  };
  auto get_real = [&](const char* key, double& out) {
    if (j.contains(key)) {
      if (!j[key].is_number())
        throw std::invalid_argument(std::string(key) + " must be a number");
      out = j[key].get<double>();
    }
  };
  get_int("N", cfg.n_agents);
  get_real("kappa", cfg.kappa);
  get_real("lambda1", cfg.lambda1);
  get_real("lambda2", cfg.lambda2);
  get_real("dt", cfg.dt);
  get_int("T", cfg.train_epochs);
  get_int("T_e", cfg.eval_epochs);
  get_int("P", cfg.particles);
  get_int("S", cfg.mc_runs);
  get_int("q", cfg.quant_levels);
  get_real("D", cfg.drop_penalty);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      throw std::invalid_argument("seed must be an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }

  if (cfg.n_agents < 1) throw std::invalid_argument("N must be >= 1");
  cfg.derive_paths();
  cfg.validate();
  return cfg;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return build_config(buf.str());
}

}  // namespace aoisim
