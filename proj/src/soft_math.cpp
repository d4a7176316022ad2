#include "nac/soft_math.hpp"

#include <algorithm>
#include <cmath>

#include "nac/errors.hpp"

namespace nac {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("temperature alpha must be a positive finite number");
  }
}

void check_row(std::span<const double> q) {
  if (q.empty()) throw InvalidArgument("Q row must have at least one action");
}

}  // namespace

double soft_state_value(std::span<const double> q, double alpha) {
  check_alpha(alpha);
  check_row(q);
  const double m = *std::max_element(q.begin(), q.end());
  double sum = 0.0;
  for (double v : q) sum += std::exp((v - m) / alpha);
  // sum >= 1 because the max term contributes exp(0).
  return m + alpha * std::log(sum);
}

PolicyRow policy_from_q(std::span<const double> q, double alpha) {
  check_alpha(alpha);
  check_row(q);
  const double m = *std::max_element(q.begin(), q.end());
  PolicyRow p;
  p.probs.resize(q.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    p.probs[a] = std::exp((q[a] - m) / alpha);
    sum += p.probs[a];
  }
  for (double& x : p.probs) x /= sum;
  return p;
}

double policy_entropy(const PolicyRow& p) {
  double h = 0.0;
  for (double x : p.probs) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

BootstrapTargets bootstrap_targets(const TransitionRecord& t, double v_next_target, double pi_a,
                                   double alpha, double gamma) {
  check_alpha(alpha);
  if (!(pi_a > 0.0)) throw InvalidArgument("probability of the sampled action must be positive");
  BootstrapTargets out;
  out.q_hat = t.done ? t.reward : t.reward + gamma * v_next_target;
  out.v_hat = out.q_hat - alpha * std::log(pi_a);
  return out;
}

std::size_t argmax_lowest(std::span<const double> q) {
  check_row(q);
  std::size_t best = 0;
  for (std::size_t a = 1; a < q.size(); ++a) {
    if (q[a] > q[best]) best = a;
  }
  return best;
}

std::size_t argmin_lowest(std::span<const double> q) {
  check_row(q);
  std::size_t best = 0;
  for (std::size_t a = 1; a < q.size(); ++a) {
    if (q[a] < q[best]) best = a;
  }
  return best;
}

}  // namespace nac
