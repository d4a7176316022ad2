#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "nac/observation.hpp"

namespace nac {

struct StepResult {
  Observation obs;
  double reward = 0.0;
  bool done = false;
  bool damage = false;
  double progress = 0.0;  // distance advanced along the track (0 for gridworld)
};

// Deterministic episodic environment. reset() must be called before the first
// step and after every terminal step.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string_view id() const noexcept = 0;
  virtual std::size_t num_actions() const noexcept = 0;
  virtual ObservationSpec observation_spec() const = 0;

  virtual Observation reset() = 0;
  // Throws UsageError when called on a finished (or never reset) episode.
  virtual StepResult step(std::size_t action) = 0;
  virtual bool done() const noexcept = 0;

  virtual std::unique_ptr<Environment> clone() const = 0;
};

enum class RewardVariant { footnote, speed_squared };

struct EnvConfig {
  std::string id = "gridnav";               // gridnav | tracksim
  std::optional<std::string> map_path;      // gridnav only; default map otherwise
  std::size_t grid_max_steps = 100;
  RewardVariant reward = RewardVariant::footnote;
  bool abs_sin = false;
  std::size_t frame_stack = 4;
};

// Throws ConfigError for an unknown id or an invalid map.
std::unique_ptr<Environment> make_environment(const EnvConfig& config);

}  // namespace nac
