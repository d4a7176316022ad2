#include "nac/agents.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "nac/errors.hpp"
#include "nac/kernels.hpp"
#include "nac/soft_math.hpp"

namespace nac {
namespace {

constexpr std::array<std::pair<AgentKind, std::string_view>, 8> kAgentNames{{
    {AgentKind::nac, "nac"},
    {AgentKind::nac_is, "nac-is"},
    {AgentKind::soft_q, "soft-q"},
    {AgentKind::hard_q, "hard-q"},
    {AgentKind::dqfd, "dqfd"},
    {AgentKind::bc, "bc"},
    {AgentKind::pcl, "pcl"},
    {AgentKind::pcl_r, "pcl-r"},
}};

// Batch-mean accumulator shared by every learner.
struct Accumulator {
  explicit Accumulator(const QModel& model) : grad(model.num_params(), 0.0) {}

  LossGradient finish(std::size_t n) && {
    LossGradient out;
    const double inv = 1.0 / static_cast<double>(n);
    for (double& g : grad) g *= inv;
    out.grad = std::move(grad);
    out.bellman_error = bellman * inv;
    out.entropy = entropy * inv;
    out.importance_weight = beta_count > 0 ? beta / static_cast<double>(beta_count) : 1.0;
    out.loss = loss * inv;
    return out;
  }

  ParamVector grad;
  double bellman = 0.0;
  double entropy = 0.0;
  double beta = 0.0;
  std::size_t beta_count = 0;
  double loss = 0.0;
};

void check_batch(const QModel& model, const Batch& batch) {
  if (batch.records.empty()) throw InvalidArgument("batch must not be empty");
  if (batch.sources.size() != batch.records.size()) {
    throw InvalidArgument("batch source flags must parallel its records");
  }
  for (const auto& r : batch.records) {
    if (r.action >= model.num_actions()) throw InvalidArgument("record action out of range");
  }
}

double next_soft_value(const TargetSnapshot& target, const TransitionRecord& r, double alpha) {
  if (r.done) return 0.0;
  return soft_state_value(target.forward(r.next_obs), alpha);
}

double next_max_value(const TargetSnapshot& target, const TransitionRecord& r) {
  if (r.done) return 0.0;
  const QRow q = target.forward(r.next_obs);
  return *std::max_element(q.values.begin(), q.values.end());
}

// log pi(a|s) = (Q(s,a) - V(s)) / alpha, finite even when pi(a|s) underflows.
double log_pi(const QRow& q, double v, std::size_t a, double alpha) { return (q[a] - v) / alpha; }

LossGradient normalized_actor_critic(const QModel& model, const TargetSnapshot& target,
                                     const Batch& batch, const HyperParams& hp, bool weighted) {
  if (!(hp.alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  check_batch(model, batch);
  Accumulator acc(model);
  const std::size_t n_actions = model.num_actions();
  std::vector<double> upstream(n_actions);
  ForwardCache cache;
  for (const TransitionRecord& r : batch.records) {
    const QRow q = model.forward(r.obs, &cache);
    const PolicyRow pi = policy_from_q(q, hp.alpha);
    const double v = soft_state_value(q, hp.alpha);
    const double logp = log_pi(q, v, r.action, hp.alpha);
    const double v_next = next_soft_value(target, r, hp.alpha);
    const double q_hat = r.done ? r.reward : r.reward + hp.gamma * v_next;
    const QRow q_target = target.forward(r.obs);
    const double logp_target =
        log_pi(q_target, soft_state_value(q_target, hp.alpha), r.action, hp.alpha);
    const double v_hat = q_hat - hp.alpha * logp_target;

    double beta = 1.0;
    if (weighted) {
      if (!(r.behavior_prob > 0.0)) {
        throw InvalidArgument("importance weighting needs behavior_prob > 0 on every record");
      }
      beta = std::min(std::exp(logp) / r.behavior_prob, hp.c);
      acc.beta += beta;
      ++acc.beta_count;
    }

    const NacUpstream terms = nac_upstream(q, r.action, q_hat, v_hat, hp.alpha);
    const double delta = terms.delta;
    const double critic = terms.critic_residual;
    for (std::size_t a = 0; a < n_actions; ++a) {
      upstream[a] = beta * (terms.actor[a] + terms.critic[a]);
    }
    model.backward(cache, upstream, acc.grad);

    acc.bellman += delta * delta;
    acc.entropy += policy_entropy(pi);
    acc.loss += beta * 0.5 * (delta * delta + critic * critic);
  }
  return std::move(acc).finish(batch.size());
}

}  // namespace

NacUpstream nac_upstream(const QRow& q, std::size_t action, double q_hat, double v_hat,
                         double alpha) {
  if (action >= q.size()) throw InvalidArgument("record action out of range");
  const PolicyRow pi = policy_from_q(q, alpha);
  NacUpstream out;
  out.delta = q[action] - q_hat;
  out.critic_residual = soft_state_value(q, alpha) - v_hat;
  out.actor.resize(q.size());
  out.critic.resize(q.size());
  for (std::size_t a = 0; a < q.size(); ++a) {
    out.actor[a] = out.delta * ((a == action ? 1.0 : 0.0) - pi[a]);
    out.critic[a] = pi[a] * out.critic_residual;
  }
  return out;
}

std::string_view agent_name(AgentKind kind) {
  for (const auto& [k, name] : kAgentNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

AgentKind parse_agent(std::string_view name) {
  for (const auto& [k, n] : kAgentNames) {
    if (n == name) return k;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

double importance_weight(double pi_a, double mu_a, double cap) {
  if (!(mu_a > 0.0)) throw InvalidArgument("behavior probability must be positive");
  return std::min(pi_a / mu_a, cap);
}

double hinge_value(std::span<const double> q, std::size_t expert_action, double margin) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < q.size(); ++a) {
    best = std::max(best, q[a] + (a == expert_action ? 0.0 : margin));
  }
  return best - q[expert_action];
}

LossGradient nac_gradient(const QModel& model, const TargetSnapshot& target, const Batch& batch,
                          const HyperParams& hp) {
  return normalized_actor_critic(model, target, batch, hp, false);
}

LossGradient nac_is_gradient(const QModel& model, const TargetSnapshot& target, const Batch& batch,
                             const HyperParams& hp) {
  return normalized_actor_critic(model, target, batch, hp, true);
}

LossGradient soft_q_gradient(const QModel& model, const TargetSnapshot& target, const Batch& batch,
                             const HyperParams& hp) {
  if (!(hp.alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  check_batch(model, batch);
  Accumulator acc(model);
  std::vector<double> upstream(model.num_actions(), 0.0);
  ForwardCache cache;
  for (const TransitionRecord& r : batch.records) {
    const QRow q = model.forward(r.obs, &cache);
    const double q_hat = r.done ? r.reward : r.reward + hp.gamma * next_soft_value(target, r, hp.alpha);
    const double delta = q[r.action] - q_hat;
    std::fill(upstream.begin(), upstream.end(), 0.0);
    upstream[r.action] = delta;
    model.backward(cache, upstream, acc.grad);
    acc.bellman += delta * delta;
    acc.entropy += policy_entropy(policy_from_q(q, hp.alpha));
    acc.loss += 0.5 * delta * delta;
  }
  return std::move(acc).finish(batch.size());
}

LossGradient hard_q_gradient(const QModel& model, const TargetSnapshot& target, const Batch& batch,
                             const HyperParams& hp) {
  check_batch(model, batch);
  Accumulator acc(model);
  std::vector<double> upstream(model.num_actions(), 0.0);
  ForwardCache cache;
  for (const TransitionRecord& r : batch.records) {
    const QRow q = model.forward(r.obs, &cache);
    const double y = r.done ? r.reward : r.reward + hp.gamma * next_max_value(target, r);
    const double delta = q[r.action] - y;
    std::fill(upstream.begin(), upstream.end(), 0.0);
    upstream[r.action] = delta;
    model.backward(cache, upstream, acc.grad);
    acc.bellman += delta * delta;
    acc.loss += 0.5 * delta * delta;
  }
  return std::move(acc).finish(batch.size());
}

LossGradient dqfd_gradient(const QModel& model, const TargetSnapshot& target, const Batch& batch,
                           const HyperParams& hp) {
  check_batch(model, batch);
  Accumulator acc(model);
  const std::size_t n_actions = model.num_actions();
  std::vector<double> upstream(n_actions, 0.0);
  ForwardCache cache;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const TransitionRecord& r = batch.records[i];
    const QRow q = model.forward(r.obs, &cache);
    const double y = r.done ? r.reward : r.reward + hp.gamma * next_max_value(target, r);
    const double delta = q[r.action] - y;
    std::fill(upstream.begin(), upstream.end(), 0.0);
    upstream[r.action] = delta;
    double loss = 0.5 * delta * delta;
    if (batch.sources[i] == Source::demo && hp.lambda_hinge > 0.0) {
      std::size_t best = 0;
      double best_value = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < n_actions; ++a) {
        const double v = q[a] + (a == r.action ? 0.0 : hp.margin);
        if (v > best_value) {
          best_value = v;
          best = a;
        }
      }
      if (best != r.action) {
        upstream[best] += hp.lambda_hinge;
        upstream[r.action] -= hp.lambda_hinge;
      }
      loss += hp.lambda_hinge * (best_value - q[r.action]);
    }
    model.backward(cache, upstream, acc.grad);
    acc.bellman += delta * delta;
    acc.loss += loss;
  }
  LossGradient out = std::move(acc).finish(batch.size());
  if (hp.lambda_wd > 0.0) {
    const auto params = model.params();
    kernels::axpy(hp.lambda_wd, params, out.grad);
    out.loss += 0.5 * hp.lambda_wd * kernels::dot(params, params);
  }
  return out;
}

LossGradient bc_gradient(const QModel& model, const Batch& batch, const HyperParams& /*hp*/) {
  check_batch(model, batch);
  Accumulator acc(model);
  std::vector<double> upstream(model.num_actions(), 0.0);
  ForwardCache cache;
  for (const TransitionRecord& r : batch.records) {
    const QRow q = model.forward(r.obs, &cache);
    const PolicyRow p = policy_from_q(q, 1.0);
    for (std::size_t a = 0; a < upstream.size(); ++a) {
      upstream[a] = p[a] - (a == r.action ? 1.0 : 0.0);
    }
    model.backward(cache, upstream, acc.grad);
    acc.loss += soft_state_value(q, 1.0) - q[r.action];
    acc.entropy += policy_entropy(p);
  }
  return std::move(acc).finish(batch.size());
}

LossGradient pcl_gradient(const QModel& model, const TargetSnapshot& target, const PathBatch& batch,
                          const HyperParams& hp, bool use_target) {
  if (!(hp.alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (batch.paths.empty()) throw InvalidArgument("path batch must not be empty");
  const auto d = static_cast<std::size_t>(hp.pcl_rollout);
  const std::size_t n_actions = model.num_actions();
  Accumulator acc(model);

  struct Step {
    ForwardCache cache;
    PolicyRow pi;
    std::size_t action;
  };
  std::vector<Step> steps;
  std::vector<double> upstream(n_actions);

  for (const auto& path : batch.paths) {
    if (path.empty()) throw InvalidArgument("empty path in path batch");
    if (path.size() > d) throw InvalidArgument("path longer than the rollout length");
    const bool terminal = path.back().done;
    if (path.size() < d && !terminal) {
      throw InvalidArgument("path shorter than the rollout length must end the episode");
    }
    steps.resize(path.size());
    double consistency = 0.0;
    double discount = 1.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const TransitionRecord& r = path[i];
      if (r.action >= n_actions) throw InvalidArgument("record action out of range");
      if (i > 0 && r.done && i + 1 < path.size()) {
        throw InvalidArgument("path continues past an episode end");
      }
      const QRow q = model.forward(r.obs, &steps[i].cache);
      const double v = soft_state_value(q, hp.alpha);
      steps[i].pi = policy_from_q(q, hp.alpha);
      steps[i].action = r.action;
      if (i == 0) {
        consistency -= v;
        acc.entropy += policy_entropy(steps[i].pi);
      }
      consistency += discount * (r.reward - hp.alpha * log_pi(q, v, r.action, hp.alpha));
      discount *= hp.gamma;
    }

    // discount == gamma^L here.
    ForwardCache end_cache;
    PolicyRow end_pi;
    const bool bootstrap = !terminal;
    if (bootstrap) {
      const Observation& end_obs = path.back().next_obs;
      if (use_target) {
        consistency += discount * soft_state_value(target.forward(end_obs), hp.alpha);
      } else {
        const QRow q_end = model.forward(end_obs, &end_cache);
        consistency += discount * soft_state_value(q_end, hp.alpha);
        end_pi = policy_from_q(q_end, hp.alpha);
      }
    }

    // d(C)/dQ(s_i, .) = -[i == 0] pi_0 - gamma^i (e_{a_i} - pi_i)
    double g = 1.0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      for (std::size_t a = 0; a < n_actions; ++a) {
        double dc = -g * ((a == steps[i].action ? 1.0 : 0.0) - steps[i].pi[a]);
        if (i == 0) dc -= steps[i].pi[a];
        upstream[a] = consistency * dc;
      }
      model.backward(steps[i].cache, upstream, acc.grad);
      g *= hp.gamma;
    }
    if (bootstrap && !use_target) {
      for (std::size_t a = 0; a < n_actions; ++a) upstream[a] = consistency * discount * end_pi[a];
      model.backward(end_cache, upstream, acc.grad);
    }

    acc.bellman += consistency * consistency;
    acc.loss += 0.5 * consistency * consistency;
  }
  return std::move(acc).finish(batch.paths.size());
}

ActionChoice select_action(const QRow& q, ExploreMode mode, double alpha, double epsilon,
                           std::mt19937_64& rng) {
  const std::size_t n = q.size();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (mode) {
    case ExploreMode::greedy:
      return {argmax_lowest(q.values), 1.0};
    case ExploreMode::eps_greedy: {
      const std::size_t best = argmax_lowest(q.values);
      std::size_t a = best;
      if (unit(rng) < epsilon) {
        a = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      }
      const double prob = (a == best ? 1.0 - epsilon : 0.0) + epsilon / static_cast<double>(n);
      return {a, prob};
    }
    case ExploreMode::sample_soft: {
      const PolicyRow p = policy_from_q(q, alpha);
      const double u = unit(rng);
      double cum = 0.0;
      std::size_t last_positive = 0;
      for (std::size_t a = 0; a < n; ++a) {
        if (p[a] > 0.0) last_positive = a;
        cum += p[a];
        if (u < cum && p[a] > 0.0) return {a, p[a]};
      }
      return {last_positive, p[last_positive]};
    }
  }
  throw InvalidArgument("unknown exploration mode");
}

std::size_t select_action(const QModel& model, const Observation& obs, ExploreMode mode,
                          double alpha, double epsilon, std::mt19937_64& rng) {
  return select_action(model.forward(obs), mode, alpha, epsilon, rng).action;
}

}  // namespace nac
