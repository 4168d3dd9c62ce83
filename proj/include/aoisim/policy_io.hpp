#pragma once

#include <string>

#include "aoisim/policy.hpp"

namespace aoisim {

// Versioned policy document. All parameter arrays round-trip losslessly.
std::string policy_to_json(const PolicySpec& spec);
PolicySpec policy_from_json(const std::string& text);

void save_policy(const PolicySpec& spec, const std::string& path);
PolicySpec load_policy(const std::string& path);

// Accepts either a path to a policy file or one of the inline forms
// "always-send", "constant-rate=0.5", "threshold=4".
PolicySpec resolve_policy_arg(const std::string& arg);

}  // namespace aoisim
