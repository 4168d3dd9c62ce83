#include "aoisim/policy_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace aoisim {
namespace {

constexpr const char* kFormat = "aoisim-policy";
constexpr int kVersion = 1;

}  // namespace

std::string policy_to_json(const PolicySpec& spec) {
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  if (const auto* up = std::get_if<UpperPolicy>(&spec)) {
    j["q"] = up->quant_levels;
    if (up->kind == UpperPolicy::Kind::Static) {
      j["kind"] = "static";
      j["theta"] = up->theta;
    } else {
      j["kind"] = "linear";
      j["obs_dim"] = up->obs_dim;
      j["weights"] = up->weights;
      j["bias"] = up->bias;
    }
  } else {
    const auto& fp = std::get<FixedPolicy>(spec);
    switch (fp.kind) {
      case FixedPolicy::Kind::AlwaysSend:
        j["kind"] = "always-send";
        break;
      case FixedPolicy::Kind::ConstantRate:
        j["kind"] = "constant-rate";
        j["omega"] = fp.omega;
        break;
      case FixedPolicy::Kind::Threshold:
        j["kind"] = "threshold";
        j["alpha"] = fp.alpha;
        break;
    }
  }
  return j.dump(2) + "\n";
}

PolicySpec policy_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("policy file is not valid JSON: ") + e.what());
  }
  if (j.value("format", "") != kFormat)
    throw std::invalid_argument("not a policy document (missing format tag)");
  if (j.value("version", 0) != kVersion)
    throw std::invalid_argument("unsupported policy document version");
  std::string kind = j.value("kind", "");
  if (kind == "static") {
    UpperPolicy up;
    up.kind = UpperPolicy::Kind::Static;
    up.quant_levels = j.at("q").get<int>();
    up.theta = j.at("theta").get<std::vector<double>>();
    if (up.theta.size() != static_cast<std::size_t>(up.quant_levels))
      throw std::invalid_argument("static policy theta length must equal q");
    return up;
  }
  if (kind == "linear") {
    UpperPolicy up;
    up.kind = UpperPolicy::Kind::LinearConditioned;
    up.quant_levels = j.at("q").get<int>();
    up.obs_dim = j.at("obs_dim").get<int>();
    up.weights = j.at("weights").get<std::vector<double>>();
    up.bias = j.at("bias").get<std::vector<double>>();
    if (up.weights.size() != static_cast<std::size_t>(up.quant_levels) *
                                 static_cast<std::size_t>(up.obs_dim) ||
        up.bias.size() != static_cast<std::size_t>(up.quant_levels))
      throw std::invalid_argument("linear policy parameter shapes are inconsistent");
    return up;
  }
  if (kind == "always-send") return FixedPolicy{FixedPolicy::Kind::AlwaysSend};
  if (kind == "constant-rate") {
    FixedPolicy fp{FixedPolicy::Kind::ConstantRate};
    fp.omega = j.at("omega").get<double>();
    if (!(fp.omega > 0.0) || fp.omega > 1.0)
      throw std::invalid_argument("constant-rate omega must be in (0, 1]");
    return fp;
  }
  if (kind == "threshold") {
    FixedPolicy fp{FixedPolicy::Kind::Threshold};
    fp.alpha = j.at("alpha").get<double>();
    if (!(fp.alpha > 0.0)) throw std::invalid_argument("threshold alpha must be > 0");
    return fp;
  }
  throw std::invalid_argument("unknown policy kind: " + kind);
}

void save_policy(const PolicySpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write policy file: " + path);
  out << policy_to_json(spec);
  if (!out) throw std::runtime_error("write failed: " + path);
}

PolicySpec load_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open policy file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return policy_from_json(buf.str());
}

PolicySpec resolve_policy_arg(const std::string& arg) {
  if (arg == "always-send") return FixedPolicy{FixedPolicy::Kind::AlwaysSend};
  auto eq = arg.find('=');
  if (eq != std::string::npos) {
    std::string name = arg.substr(0, eq);
    std::string value = arg.substr(eq + 1);
    try {
      if (name == "constant-rate") {
        FixedPolicy fp{FixedPolicy::Kind::ConstantRate};
        fp.omega = std::stod(value);
        if (!(fp.omega > 0.0) || fp.omega > 1.0)
          throw std::invalid_argument("constant-rate omega must be in (0, 1]");
        return fp;
      }
      if (name == "threshold") {
        FixedPolicy fp{FixedPolicy::Kind::Threshold};
        fp.alpha = std::stod(value);
        if (!(fp.alpha > 0.0)) throw std::invalid_argument("threshold alpha must be > 0");
        return fp;
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad policy parameter in: " + arg);
    }
  }
  if (std::filesystem::exists(arg)) return load_policy(arg);
  throw std::invalid_argument("policy argument is neither a file nor a known inline form: " + arg);
}

}  // namespace aoisim
