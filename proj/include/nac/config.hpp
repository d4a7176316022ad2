#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nac/agents.hpp"
#include "nac/environment.hpp"
#include "nac/hyper_params.hpp"
#include "nac/mlp_q.hpp"

namespace nac {

// Everything one harness invocation needs besides the corpus contents.
struct RunConfig {
  HyperParams hp;
  EnvConfig env;
  AgentKind algo = AgentKind::nac;
  std::vector<std::size_t> hidden{64, 64};
  Activation activation = Activation::relu;
  std::optional<std::string> demos;
  std::string out = "runs";

  // Every key with its final textual value, in key order.
  std::map<std::string, std::string> resolved;
};

// key -> value pairs, later entries winning.
using Overrides = std::vector<std::pair<std::string, std::string>>;

// Defaults, then the preset of the chosen env, then the file, then overrides.
// A missing path means defaults only. `k = inf` selects a demo-only run.
// Throws ConfigError naming the key for unknown keys or unparsable or
// out-of-range values.
RunConfig parse_config(const std::optional<std::filesystem::path>& file, const Overrides& overrides);

// Reads `key = value` lines ('#' starts a comment). Throws ConfigError with
// the line number on malformed lines.
Overrides read_config_file(const std::filesystem::path& file);

// Every configuration key with its effective value.
std::map<std::string, std::string> config_snapshot(const RunConfig& config);

// Names accepted by parse_config.
std::vector<std::string> config_keys();

// Step budgets and discounting tuned per environment.
Overrides env_preset(const std::string& env_id);

// Fresh model for the environment: a zero table for discrete observations,
// a seeded MLP otherwise.
std::unique_ptr<QModel> make_model(const RunConfig& config, const Environment& env);

}  // namespace nac
