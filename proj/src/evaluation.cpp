#include "nac/evaluation.hpp"

#include <cmath>
#include <random>

#include "nac/errors.hpp"
#include "nac/soft_math.hpp"

namespace nac {

EvalResult summarize_returns(std::vector<double> returns) {
  EvalResult out;
  if (returns.empty()) return out;
  double sum = 0.0;
  for (double r : returns) sum += r;
  out.mean_return = sum / static_cast<double>(returns.size());
  double sq = 0.0;
  for (double r : returns) sq += (r - out.mean_return) * (r - out.mean_return);
  out.std_return = std::sqrt(sq / static_cast<double>(returns.size()));
  out.returns = std::move(returns);
  return out;
}

EvalResult evaluate_policy(const QModel& model, const Environment& env, std::size_t episodes,
                           std::uint64_t /*seed*/) {
  if (episodes < 1) throw InvalidArgument("evaluation needs at least one episode");
  auto sim = env.clone();
  std::vector<double> returns;
  returns.reserve(episodes);
  for (std::size_t e = 0; e < episodes; ++e) {
    Observation obs = sim->reset();
    double total = 0.0;
    while (!sim->done()) {
      const QRow q = model.forward(obs);
      StepResult step = sim->step(argmax_lowest(q.values));
      total += step.reward;
      obs = std::move(step.obs);
    }
    returns.push_back(total);
  }
  return summarize_returns(std::move(returns));
}

EvalResult evaluate_random(const Environment& env, std::size_t episodes, std::uint64_t seed) {
  if (episodes < 1) throw InvalidArgument("evaluation needs at least one episode");
  auto sim = env.clone();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, sim->num_actions() - 1);
  std::vector<double> returns;
  for (std::size_t e = 0; e < episodes; ++e) {
    sim->reset();
    double total = 0.0;
    while (!sim->done()) total += sim->step(pick(rng)).reward;
    returns.push_back(total);
  }
  return summarize_returns(std::move(returns));
}

std::vector<std::size_t> greedy_actions(const QModel& model, const Environment& env) {
  auto sim = env.clone();
  Observation obs = sim->reset();
  std::vector<std::size_t> actions;
  while (!sim->done()) {
    const std::size_t a = argmax_lowest(model.forward(obs).values);
    actions.push_back(a);
    obs = sim->step(a).obs;
  }
  return actions;
}

double validation_bellman_error(const QModel& model, std::span<const TransitionRecord> split,
                                const HyperParams& hp) {
  if (split.empty()) throw InvalidArgument("validation split is empty");
  double sum = 0.0;
  for (const auto& r : split) {
    const double q = model.forward(r.obs)[r.action];
    const double v_next = r.done ? 0.0 : soft_state_value(model.forward(r.next_obs), hp.alpha);
    const double residual = q - r.reward - hp.gamma * v_next;
    sum += residual * residual;
  }
  return sum / static_cast<double>(split.size());
}

}  // namespace nac
