#pragma once

// Minibatch parameter gradients for every learner in the workbench, plus
// action selection. Gradients are descent directions: params -= lr * grad.
// All gradient functions are pure in (model, target, batch, hp).

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "nac/hyper_params.hpp"
#include "nac/observation.hpp"
#include "nac/q_model.hpp"

namespace nac {

enum class AgentKind { nac, nac_is, soft_q, hard_q, dqfd, bc, pcl, pcl_r };

std::string_view agent_name(AgentKind kind);
// Throws ConfigError for an unknown name.
AgentKind parse_agent(std::string_view name);

struct Batch {
  std::vector<TransitionRecord> records;
  std::vector<Source> sources;  // parallel to records

  std::size_t size() const noexcept { return records.size(); }
};

// Contiguous sub-trajectories for path consistency. Each path holds d records,
// or fewer only if its last record is episode-terminal.
struct PathBatch {
  std::vector<std::vector<TransitionRecord>> paths;
};

struct LossGradient {
  ParamVector grad;
  double bellman_error = 0.0;      // mean squared one-step residual
  double entropy = 0.0;            // mean policy entropy at s
  double importance_weight = 1.0;  // mean beta (1 when unused)
  double loss = 0.0;               // mean surrogate loss value
};

/// Normalized actor-critic. Per transition:
///   actor  (grad Q(s,a) - grad V(s)) (Q(s,a) - q_hat)
///   critic  grad V(s) (V(s) - v_hat)
/// with grad V(s) = sum_a' pi(a'|s) grad Q(s,a'). Both targets come from the
/// snapshot: q_hat = r + gamma V'(s') and v_hat = q_hat - alpha ln pi'(a|s).
LossGradient nac_gradient(const QModel& model, const TargetSnapshot& target, const Batch& batch,
                          const HyperParams& hp);

/// nac_gradient with each record weighted by beta = min(pi(a|s) / mu(a|s), c).
LossGradient nac_is_gradient(const QModel& model, const TargetSnapshot& target, const Batch& batch,
                             const HyperParams& hp);

/// grad Q(s,a) (Q(s,a) - r - gamma V_target(s')).
LossGradient soft_q_gradient(const QModel& model, const TargetSnapshot& target, const Batch& batch,
                             const HyperParams& hp);

/// grad Q(s,a) (Q(s,a) - r - gamma max_a' Q_target(s',a')).
LossGradient hard_q_gradient(const QModel& model, const TargetSnapshot& target, const Batch& batch,
                             const HyperParams& hp);

/// Hard TD on every record, large-margin hinge on demo records only, and
/// L2 weight decay lambda_wd * theta.
LossGradient dqfd_gradient(const QModel& model, const TargetSnapshot& target, const Batch& batch,
                           const HyperParams& hp);

/// Cross-entropy treating the Q row as logits.
LossGradient bc_gradient(const QModel& model, const Batch& batch, const HyperParams& hp);

/// Squared soft path consistency. use_target selects V(s_{t+d}) from the
/// snapshot (PCL) or from the live model, differentiated through (PCL-R).
LossGradient pcl_gradient(const QModel& model, const TargetSnapshot& target, const PathBatch& paths,
                          const HyperParams& hp, bool use_target);

// dL/dQ(s, .) of one NAC record, split into its two terms:
//   actor[a']  = delta (1[a' = a] - pi(a'))     with delta = Q(s,a) - q_hat
//   critic[a'] = pi(a') (V(s) - v_hat)
struct NacUpstream {
  std::vector<double> actor;
  std::vector<double> critic;
  double delta = 0.0;
  double critic_residual = 0.0;
};
NacUpstream nac_upstream(const QRow& q, std::size_t action, double q_hat, double v_hat,
                         double alpha);

// Per-record scalar helpers exposed for tests and the harness.
double hinge_value(std::span<const double> q, std::size_t expert_action, double margin);
double importance_weight(double pi_a, double mu_a, double cap);

enum class ExploreMode { sample_soft, greedy, eps_greedy };

struct ActionChoice {
  std::size_t action = 0;
  double prob = 1.0;  // probability the selection rule assigned to `action`
};

ActionChoice select_action(const QRow& q, ExploreMode mode, double alpha, double epsilon,
                           std::mt19937_64& rng);
std::size_t select_action(const QModel& model, const Observation& obs, ExploreMode mode,
                          double alpha, double epsilon, std::mt19937_64& rng);

}  // namespace nac
