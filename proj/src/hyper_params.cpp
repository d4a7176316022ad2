#include "nac/hyper_params.hpp"

#include <algorithm>
#include <cmath>

#include "nac/errors.hpp"

namespace nac {
namespace {

void require(bool ok, const char* key, const char* why) {
  if (!ok) throw ConfigError(std::string("invalid value for '") + key + "': " + why);
}

}  // namespace

void HyperParams::validate() const {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha", "must be > 0");
  require(gamma >= 0.0 && gamma <= 1.0, "gamma", "must lie in [0, 1]");
  require(k >= 0, "k", "must be >= 0");
  require(target_period >= 1, "target_period", "must be >= 1");
  require(lr_start > 0.0, "lr_start", "must be > 0");
  require(lr_end > 0.0, "lr_end", "must be > 0");
  require(lr_end <= lr_start, "lr_end", "must not exceed lr_start");
  require(anneal_fraction >= 0.0 && anneal_fraction <= 1.0, "anneal_fraction", "must lie in [0, 1]");
  require(clip_norm > 0.0, "clip_norm", "must be > 0");
  require(batch_size >= 1, "batch_size", "must be >= 1");
  require(c > 0.0, "c", "must be > 0");
  require(epsilon_explore >= 0.0 && epsilon_explore <= 1.0, "epsilon_explore", "must lie in [0, 1]");
  require(margin >= 0.0, "margin", "must be >= 0");
  require(lambda_hinge >= 0.0, "lambda_hinge", "must be >= 0");
  require(lambda_wd >= 0.0, "lambda_wd", "must be >= 0");
  require(pcl_rollout >= 1, "pcl_rollout", "must be >= 1");
  require(rho_demo >= 0.0 && rho_demo <= 1.0, "rho_demo", "must lie in [0, 1]");
  require(total_steps >= 0, "total_steps", "must be >= 0");
  require(eval_interval >= 1, "eval_interval", "must be >= 1");
  require(eval_episodes >= 1, "eval_episodes", "must be >= 1");
  require(replay_capacity >= 1, "replay_capacity", "must be >= 1");
  require(val_size >= 0, "val_size", "must be >= 0");
}

double learning_rate_at(const HyperParams& hp, std::int64_t step) {
  const double knee = hp.anneal_fraction * static_cast<double>(hp.total_steps);
  if (!(knee > 0.0)) return hp.lr_end;
  const double frac = std::clamp(static_cast<double>(step) / knee, 0.0, 1.0);
  return hp.lr_start + (hp.lr_end - hp.lr_start) * frac;
}

}  // namespace nac
