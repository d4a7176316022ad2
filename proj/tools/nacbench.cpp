// nacbench: train experts, generate or record demonstrations, train and
// evaluate learners from the command line.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include "nac/checkpoint.hpp"
#include "nac/config.hpp"
#include "nac/corpus.hpp"
#include "nac/demos.hpp"
#include "nac/errors.hpp"
#include "nac/evaluation.hpp"
#include "nac/gridnav.hpp"
#include "nac/manifest.hpp"
#include "nac/trainer.hpp"

namespace fs = std::filesystem;
using namespace nac;

namespace {

// Flags shared by every subcommand that resolves a RunConfig.
struct ConfigFlags {
  std::optional<std::string> file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app, const std::vector<std::string>& keys) {
    app->add_option("--config", file, "key = value configuration file");
    for (const auto& key : keys) {
      auto* opt = app->add_option_function<std::string>(
          "--" + key, [this, key](const std::string& v) { values[key] = v; },
          "override config key '" + key + "'");
      if (key == "out") opt->description("output directory (or file for gen-demos/play)");
    }
  }

  RunConfig resolve() const {
    Overrides o(values.begin(), values.end());
    return parse_config(file ? std::optional<fs::path>(*file) : std::nullopt, o);
  }
};

fs::path prepare_out_dir(const RunConfig& config) {
  const fs::path dir = config.out;
  fs::create_directories(dir);
  return dir;
}

TrainingOptions options_for(const fs::path& dir, const std::string& checkpoint_name) {
  TrainingOptions opt;
  opt.metrics_path = dir / "metrics.csv";
  opt.checkpoint_path = dir / checkpoint_name;
  opt.diagnostic_path = dir / "diagnostic.txt";
  opt.log = &std::cout;
  return opt;
}

int run_expert(const ConfigFlags& flags) {
  RunConfig config = flags.resolve();
  config.algo = AgentKind::soft_q;
  config.hp.k = 0;
  config.demos.reset();
  const auto env = make_environment(config.env);
  const fs::path dir = prepare_out_dir(config);
  write_manifest(make_manifest(config), dir / "manifest.json");
  train_expert(config, *env, options_for(dir, "expert.ckpt"));
  const EvalResult random = evaluate_random(*env, static_cast<std::size_t>(config.hp.eval_episodes),
                                            config.hp.seed);
  std::cout << "random-policy return " << random.mean_return << " +- " << random.std_return << '\n';
  std::cout << "wrote " << (dir / "expert.ckpt").string() << '\n';
  return 0;
}

struct DemoFlags {
  std::optional<std::string> expert;
  std::size_t n = 10'000;
  double epsilon = 0.01;
  double corruption = 0.0;
};

int run_gen_demos(const ConfigFlags& flags, const DemoFlags& demo) {
  const RunConfig config = flags.resolve();
  const auto env = make_environment(config.env);
  DemoOptions options;
  options.n_transitions = demo.n;
  options.epsilon = demo.epsilon;
  options.corruption = demo.corruption;
  options.seed = config.hp.seed;

  std::unique_ptr<QModel> expert;
  if (demo.expert) {
    expert = load_checkpoint(*demo.expert);
    options.generator = "expert:" + fs::path(*demo.expert).filename().string();
  } else if (config.env.id == "gridnav") {
    const auto& grid = dynamic_cast<const GridNav&>(*env);
    expert = std::make_unique<TabularQ>(long_path_expert(grid.map()));
    options.generator = "scripted-long-path";
  } else {
    throw ConfigError("--expert is required for environment '" + config.env.id + "'");
  }
  const DemoCorpus corpus = generate_demos(*expert, *env, options);
  const fs::path out = config.out;
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_corpus(corpus, out);
  const CorpusStats s = corpus_stats(corpus, static_cast<std::size_t>(config.hp.val_size));
  std::cout << "wrote " << s.transitions << " transitions in " << s.episodes << " episodes to "
            << out.string() << " (mean return " << s.mean_return << ", corrupted "
            << s.corrupted_fraction << ")\n";
  return 0;
}

int run_train(const ConfigFlags& flags) {
  const RunConfig config = flags.resolve();
  const auto env = make_environment(config.env);
  std::optional<DemoCorpus> corpus;
  if (config.demos) {
    corpus = read_corpus(fs::path(*config.demos));
    check_corpus_fits(*corpus, *env);
    if (config.algo == AgentKind::nac_is && corpus->header.generator == "human") {
      std::cerr << "nacbench: warning: human demonstrations carry placeholder behavior "
                   "probabilities; importance weights are not meaningful\n";
    }
  }
  const fs::path dir = prepare_out_dir(config);
  write_manifest(make_manifest(config), dir / "manifest.json");
  run_training(config, *env, corpus ? &*corpus : nullptr, options_for(dir, "model.ckpt"));
  std::cout << "wrote " << (dir / "metrics.csv").string() << '\n';
  return 0;
}

int run_eval(const ConfigFlags& flags, const std::optional<std::string>& checkpoint, bool random) {
  const RunConfig config = flags.resolve();
  const auto env = make_environment(config.env);
  const auto episodes = static_cast<std::size_t>(config.hp.eval_episodes);
  EvalResult r;
  if (random) {
    r = evaluate_random(*env, episodes, config.hp.seed);
  } else {
    if (!checkpoint) throw ConfigError("--checkpoint is required unless --random is given");
    const auto model = load_checkpoint(*checkpoint);
    if (!(model->input_spec() == env->observation_spec()) ||
        model->num_actions() != env->num_actions()) {
      throw ConfigError("checkpoint does not fit environment '" + config.env.id + "'");
    }
    r = evaluate_policy(*model, *env, episodes, config.hp.seed);
  }
  std::cout << "mean_return " << r.mean_return << "\nstd_return " << r.std_return << '\n';
  return 0;
}

int run_play(const ConfigFlags& flags) {
  const RunConfig config = flags.resolve();
  const auto env = make_environment(config.env);
  const DemoCorpus corpus =
      record_interactive(*env, KeyBindings::for_env(config.env.id), std::cin, std::cout);
  const fs::path out = config.out;
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_corpus(corpus, out);
  std::cout << "wrote " << corpus.records.size() << " transitions to " << out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning from imperfect demonstrations workbench"};
  app.require_subcommand(1);
  const auto keys = config_keys();

  ConfigFlags expert_flags, gen_flags, train_flags, eval_flags, play_flags;
  DemoFlags demo;
  std::optional<std::string> checkpoint;
  bool random = false;

  auto* expert = app.add_subcommand("expert", "train a soft-Q expert from scratch");
  expert_flags.attach(expert, keys);

  auto* gen = app.add_subcommand("gen-demos", "roll out an expert into a demonstration corpus");
  gen_flags.attach(gen, keys);
  gen->add_option("--expert", demo.expert, "expert checkpoint (gridnav defaults to the scripted long path)");
  gen->add_option("--n", demo.n, "transitions to collect")->check(CLI::PositiveNumber);
  gen->add_option("--epsilon", demo.epsilon, "uniform random action probability")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--corruption", demo.corruption, "argmin-action probability")->check(CLI::Range(0.0, 1.0));

  auto* train = app.add_subcommand("train", "run the training loop for one algorithm");
  train_flags.attach(train, keys);

  auto* eval = app.add_subcommand("eval", "greedy evaluation of a checkpoint");
  eval_flags.attach(eval, keys);
  eval->add_option("--checkpoint", checkpoint, "model checkpoint");
  eval->add_flag("--random", random, "evaluate the uniform-random policy instead");

  auto* play = app.add_subcommand("play", "record demonstrations from keyboard input");
  play_flags.attach(play, keys);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*expert) return run_expert(expert_flags);
    if (*gen) return run_gen_demos(gen_flags, demo);
    if (*train) return run_train(train_flags);
    if (*eval) return run_eval(eval_flags, checkpoint, random);
    if (*play) return run_play(play_flags);
  } catch (const ConfigError& e) {
    std::cerr << "nacbench: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "nacbench: numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "nacbench: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
