#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "nac/agents.hpp"
#include "nac/config.hpp"
#include "nac/corpus.hpp"
#include "nac/environment.hpp"
#include "nac/metrics.hpp"
#include "nac/replay.hpp"

namespace nac {

// Snapshot handed to an observer after the update of step t.
struct StepEvent {
  std::int64_t t = 0;
  Phase phase = Phase::demo;
  double lr = 0.0;
  const QModel* model = nullptr;
  const TargetSnapshot* target = nullptr;
  const ReplayBuffer* replay = nullptr;
  const LossGradient* loss = nullptr;
  std::size_t updates = 0;  // gradient applications so far
};

struct TrainingOptions {
  std::optional<std::filesystem::path> metrics_path;
  std::optional<std::filesystem::path> checkpoint_path;
  // Written when training aborts on a non-finite value.
  std::optional<std::filesystem::path> diagnostic_path;
  std::function<void(const StepEvent&)> on_step;
  std::ostream* log = nullptr;
  // Starting parameters instead of a fresh model (must fit the env).
  const QModel* init = nullptr;
};

struct TrainingResult {
  std::unique_ptr<QModel> model;
  std::vector<MetricsRow> rows;
  std::size_t updates = 0;
};

ExploreMode exploration_mode(AgentKind algo);

/// Batch gradient of `algo` for one step. Demo-phase BC uses the cloning
/// loss and switches to hard TD once interacting.
LossGradient agent_gradient(AgentKind algo, Phase phase, const QModel& model,
                            const TargetSnapshot& target, const Batch& batch,
                            const PathBatch& paths, const HyperParams& hp);

/// Algorithm 1. For t = 1..total_steps: the demo phase (t <= k) samples from
/// the corpus training split; the env phase takes one environment step with
/// the algorithm's exploration rule, stores it in the replay buffer, and
/// samples from the buffer (DQfD mixes in rho_demo demo records). One
/// clipped update per step with the annealed learning rate; the target is
/// re-synced after every T-th update; metrics every eval_interval steps and
/// at the final step.
/// Throws ConfigError when the corpus does not fit env, or when a demo phase
/// is requested without a corpus; NumericError on a non-finite loss or
/// gradient (after writing the diagnostic file, if configured).
TrainingResult run_training(const RunConfig& config, const Environment& env,
                            const DemoCorpus* corpus, const TrainingOptions& options = {});

/// Soft-Q from scratch with k = 0 and no corpus.
TrainingResult train_expert(const RunConfig& config, const Environment& env,
                            const TrainingOptions& options = {});

// Fails with ConfigError unless the corpus was recorded in env.
void check_corpus_fits(const DemoCorpus& corpus, const Environment& env);

}  // namespace nac
