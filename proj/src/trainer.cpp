#include "nac/trainer.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>

#include "nac/checkpoint.hpp"
#include "nac/errors.hpp"
#include "nac/evaluation.hpp"

namespace nac {

namespace {

bool uses_paths(AgentKind algo) { return algo == AgentKind::pcl || algo == AgentKind::pcl_r; }

void write_diagnostic(const std::filesystem::path& path, const RunConfig& config, std::int64_t t,
                      Phase phase, double lr, const QModel& model, const Batch& batch,
                      const std::string& what) {
  std::ofstream out(path);
  out << "error: " << what << '\n';
  out << "algo: " << agent_name(config.algo) << '\n';
  out << "step: " << t << '\n';
  out << "phase: " << phase_name(phase) << '\n';
  out << "lr: " << lr << '\n';
  out << "param_norm: " << l2_norm(model.params()) << '\n';
  std::size_t non_finite = 0;
  for (double p : model.params()) non_finite += std::isfinite(p) ? 0 : 1;
  out << "non_finite_params: " << non_finite << '\n';
  for (const auto& r : batch.records) {
    out << "record episode=" << r.episode << " t=" << r.t << " action=" << r.action
        << " reward=" << r.reward << " done=" << r.done << " mu=" << r.behavior_prob << '\n';
  }
}

}  // namespace

ExploreMode exploration_mode(AgentKind algo) {
  switch (algo) {
    case AgentKind::hard_q:
    case AgentKind::dqfd:
    case AgentKind::bc:
      return ExploreMode::eps_greedy;
    default:
      return ExploreMode::sample_soft;
  }
}

LossGradient agent_gradient(AgentKind algo, Phase phase, const QModel& model,
                            const TargetSnapshot& target, const Batch& batch,
                            const PathBatch& paths, const HyperParams& hp) {
  switch (algo) {
    case AgentKind::nac:
      return nac_gradient(model, target, batch, hp);
    case AgentKind::nac_is:
      return nac_is_gradient(model, target, batch, hp);
    case AgentKind::soft_q:
      return soft_q_gradient(model, target, batch, hp);
    case AgentKind::hard_q:
      return hard_q_gradient(model, target, batch, hp);
    case AgentKind::dqfd:
      return dqfd_gradient(model, target, batch, hp);
    case AgentKind::bc:
      return phase == Phase::demo ? bc_gradient(model, batch, hp)
                                  : hard_q_gradient(model, target, batch, hp);
    case AgentKind::pcl:
      return pcl_gradient(model, target, paths, hp, true);
    case AgentKind::pcl_r:
      return pcl_gradient(model, target, paths, hp, false);
  }
  throw InvalidArgument("unknown agent kind");
}

void check_corpus_fits(const DemoCorpus& corpus, const Environment& env) {
  if (corpus.header.env != env.id()) {
    throw ConfigError("corpus was recorded in '" + corpus.header.env + "' but the run uses '" +
                      std::string(env.id()) + "'");
  }
  if (corpus.header.n_actions != env.num_actions() ||
      !(corpus.header.obs == env.observation_spec())) {
    throw ConfigError("corpus shapes (" + corpus.header.obs.describe() +
                      ") do not match the environment (" + env.observation_spec().describe() + ")");
  }
}

TrainingResult run_training(const RunConfig& config, const Environment& env,
                            const DemoCorpus* corpus, const TrainingOptions& options) {
  const HyperParams& hp = config.hp;
  hp.validate();
  if (corpus) check_corpus_fits(*corpus, env);

  std::span<const TransitionRecord> demos;
  std::span<const TransitionRecord> validation;
  if (corpus) {
    const CorpusSplit split = split_validation(*corpus, static_cast<std::size_t>(hp.val_size));
    demos = split.train;
    validation = split.validation;
  }
  const PhaseSchedule schedule{hp.k};
  if (hp.k > 0 && hp.total_steps > 0 && demos.empty()) {
    throw ConfigError("a demonstration phase (k > 0) needs a non-empty corpus training split");
  }

  std::unique_ptr<QModel> model;
  if (options.init) {
    if (!(options.init->input_spec() == env.observation_spec()) ||
        options.init->num_actions() != env.num_actions()) {
      throw ConfigError("initial model does not fit the environment");
    }
    model = options.init->clone();
  } else {
    model = make_model(config, env);
  }
  TargetSnapshot target = sync_target(*model, 0);
  ReplayBuffer replay(static_cast<std::size_t>(hp.replay_capacity));

  // Independent streams so that evaluation cadence never perturbs learning.
  std::mt19937_64 sample_rng(hp.seed);
  std::mt19937_64 act_rng(hp.seed ^ 0x9e3779b97f4a7c15ULL);

  auto sim = env.clone();
  Observation obs = sim->reset();
  std::int64_t episode = 0;
  std::int64_t episode_t = 0;
  const ExploreMode explore = exploration_mode(config.algo);
  const auto batch_size = static_cast<std::size_t>(hp.batch_size);
  const auto path_length = static_cast<std::size_t>(hp.pcl_rollout);

  std::optional<MetricsWriter> writer;
  if (options.metrics_path) writer.emplace(*options.metrics_path);
  TrainingResult result;

  const auto evaluate = [&](std::int64_t t, Phase phase) {
    const EvalResult e =
        evaluate_policy(*model, env, static_cast<std::size_t>(hp.eval_episodes), hp.seed);
    MetricsRow row;
    row.step = t;
    row.phase = std::string(phase_name(phase));
    row.algo = std::string(agent_name(config.algo));
    row.seed = hp.seed;
    row.mean_return = e.mean_return;
    row.std_return = e.std_return;
    row.val_bellman_error = validation.empty() ? std::nan("")
                                               : validation_bellman_error(*model, validation, hp);
    if (writer) writer->append(row);
    if (options.log) *options.log << format_metrics_row(row) << '\n';
    result.rows.push_back(std::move(row));
  };

  for (std::int64_t t = 1; t <= hp.total_steps; ++t) {
    const Phase phase = phase_for_step(schedule, t);
    Batch batch;
    PathBatch paths;
    if (phase == Phase::demo) {
      if (uses_paths(config.algo)) paths = sample_paths(demos, batch_size, path_length, sample_rng);
      else batch = sample_batch(demos, Source::demo, batch_size, sample_rng);
    } else {
      const QRow q = model->forward(obs);
      const ActionChoice choice = select_action(q, explore, hp.alpha, hp.epsilon_explore, act_rng);
      StepResult step = sim->step(choice.action);
      TransitionRecord rec;
      rec.episode = episode;
      rec.t = episode_t++;
      rec.obs = std::move(obs);
      rec.action = choice.action;
      rec.reward = step.reward;
      rec.next_obs = step.obs;
      rec.done = step.done;
      rec.behavior_prob = choice.prob;
      replay.push(std::move(rec));
      obs = std::move(step.obs);
      if (sim->done()) {
        obs = sim->reset();
        ++episode;
        episode_t = 0;
      }
      if (uses_paths(config.algo)) {
        paths = sample_paths(replay, batch_size, path_length, sample_rng);
      } else if (config.algo == AgentKind::dqfd && !demos.empty()) {
        batch = sample_mixed(demos, replay, batch_size, hp.rho_demo, sample_rng);
      } else {
        batch = sample_batch(replay, batch_size, sample_rng);
      }
    }

    const double lr = learning_rate_at(hp, t);
    LossGradient loss;
    try {
      loss = agent_gradient(config.algo, phase, *model, target, batch, paths, hp);
      if (!std::isfinite(loss.loss)) throw NumericError("non-finite loss");
      apply_update(*model, loss.grad, lr, hp.clip_norm, hp.clip_mode);
    } catch (const NumericError& e) {
      const std::string what = std::string(e.what()) + " at step " + std::to_string(t);
      if (options.diagnostic_path) {
        write_diagnostic(*options.diagnostic_path, config, t, phase, lr, *model, batch, what);
      }
      throw NumericError(what);
    }
    ++result.updates;

    if (t % hp.target_period == 0) target = sync_target(*model, t);

    if (options.on_step) {
      StepEvent ev;
      ev.t = t;
      ev.phase = phase;
      ev.lr = lr;
      ev.model = model.get();
      ev.target = &target;
      ev.replay = &replay;
      ev.loss = &loss;
      ev.updates = result.updates;
      options.on_step(ev);
    }
    if (t % hp.eval_interval == 0 || t == hp.total_steps) evaluate(t, phase);
  }

  if (options.checkpoint_path) save_checkpoint(*model, *options.checkpoint_path);
  result.model = std::move(model);
  return result;
}

TrainingResult train_expert(const RunConfig& config, const Environment& env,
                            const TrainingOptions& options) {
  RunConfig expert = config;
  expert.algo = AgentKind::soft_q;
  expert.hp.k = 0;
  return run_training(expert, env, nullptr, options);
}

}  // namespace nac
