#pragma once

// Maximum-entropy value math on per-state action rows. Every function is pure
// and safe to call concurrently.

#include <cstddef>
#include <span>
#include <vector>

#include "nac/observation.hpp"

namespace nac {

// Q(s, .) over the actions of one state.
struct QRow {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t a) const { return values[a]; }
};

// pi(. | s); entries in [0, 1] summing to one.
struct PolicyRow {
  std::vector<double> probs;

  std::size_t size() const noexcept { return probs.size(); }
  double operator[](std::size_t a) const { return probs[a]; }
};

struct BootstrapTargets {
  double q_hat = 0.0;
  double v_hat = 0.0;
};

/// alpha * log sum_a exp(Q(a) / alpha), evaluated with max-subtraction so rows
/// with entries up to 1e6 in magnitude neither overflow nor lose the max.
/// Throws InvalidArgument for alpha <= 0 or an empty row.
double soft_state_value(std::span<const double> q, double alpha);
inline double soft_state_value(const QRow& q, double alpha) {
  return soft_state_value(std::span<const double>(q.values), alpha);
}

/// Boltzmann policy exp((Q(a) - V(s)) / alpha). Invariant to adding a constant
/// to every entry of q.
PolicyRow policy_from_q(std::span<const double> q, double alpha);
inline PolicyRow policy_from_q(const QRow& q, double alpha) {
  return policy_from_q(std::span<const double>(q.values), alpha);
}

/// Shannon entropy in nats with 0 ln 0 = 0.
double policy_entropy(const PolicyRow& p);

/// One-step soft bootstrap targets for transition t:
///   q_hat = r + gamma * V'(s')             (r when t.done)
///   v_hat = q_hat - alpha * ln pi(a | s)
/// v_hat is the single-sample estimate of E_pi[r + gamma V'] + alpha H(pi).
/// Throws InvalidArgument when pi_a <= 0 or alpha <= 0.
BootstrapTargets bootstrap_targets(const TransitionRecord& t, double v_next_target, double pi_a,
                                   double alpha, double gamma);

std::size_t argmax_lowest(std::span<const double> q);
std::size_t argmin_lowest(std::span<const double> q);

}  // namespace nac
