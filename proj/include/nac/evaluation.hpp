#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nac/environment.hpp"
#include "nac/hyper_params.hpp"
#include "nac/q_model.hpp"

namespace nac {

struct EvalResult {
  double mean_return = 0.0;
  double std_return = 0.0;  // population
  std::vector<double> returns;
};

/// Greedy rollouts (lowest-index tie-break) from fresh resets. Both
/// environments reset deterministically, so `seed` only matters for
/// environments with stochastic resets; it is accepted for interface parity.
/// Throws InvalidArgument if episodes < 1.
EvalResult evaluate_policy(const QModel& model, const Environment& env, std::size_t episodes,
                           std::uint64_t seed = 0);

/// Uniform-random policy returns, deterministic per seed.
EvalResult evaluate_random(const Environment& env, std::size_t episodes, std::uint64_t seed);

/// Actions of one greedy episode from reset.
std::vector<std::size_t> greedy_actions(const QModel& model, const Environment& env);

/// Mean of (Q(s,a) - r - gamma (1 - done) V(s'))^2 with the model acting as
/// its own target. Throws InvalidArgument on an empty split.
double validation_bellman_error(const QModel& model, std::span<const TransitionRecord> split,
                                const HyperParams& hp);

EvalResult summarize_returns(std::vector<double> returns);

}  // namespace nac
