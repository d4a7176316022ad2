#pragma once

#include <cstdint>
#include <limits>

#include "nac/q_model.hpp"

namespace nac {

// Sentinel for runs that never leave the demonstration phase.
inline constexpr std::int64_t kDemoForever = std::numeric_limits<std::int64_t>::max();

// Every scalar knob of the training procedure. Defaults are the published
// values; environment presets override a few (see env_defaults()).
struct HyperParams {
  double alpha = 0.1;
  double gamma = 0.99;
  std::int64_t k = 0;                      // demonstration-phase steps
  std::int64_t target_period = 10'000;     // T
  double lr_start = 1e-4;
  double lr_end = 5e-5;
  double anneal_fraction = 0.1;
  double clip_norm = 10.0;
  ClipMode clip_mode = ClipMode::global_norm;
  std::int64_t batch_size = 32;
  double c = 10.0;                         // importance-ratio cap
  double epsilon_explore = 0.01;
  double margin = 0.8;
  double lambda_hinge = 1.0;
  double lambda_wd = 1e-5;
  std::int64_t pcl_rollout = 1;
  double rho_demo = 0.25;
  std::int64_t total_steps = 100'000;
  std::int64_t eval_interval = 1'000;
  std::int64_t eval_episodes = 20;
  std::uint64_t seed = 0;
  std::int64_t replay_capacity = 1'000'000;
  std::int64_t val_size = 4'500;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Linear anneal from lr_start to lr_end over the first anneal_fraction of
// total_steps, then constant.
double learning_rate_at(const HyperParams& hp, std::int64_t step);

}  // namespace nac
