// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracle.hpp"
#include "nac/agents.hpp"
#include "nac/config.hpp"
#include "nac/corpus.hpp"
#include "nac/demos.hpp"
#include "nac/evaluation.hpp"
#include "nac/gridnav.hpp"
#include "nac/replay.hpp"
#include "nac/soft_math.hpp"
#include "nac/tabular_q.hpp"
#include "nac/tracksim.hpp"
#include "nac/trainer.hpp"

using namespace nac;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

fs::path work_dir() {
  const fs::path p = fs::temp_directory_path() / "nac_acceptance";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---------------------------------------------------------------- oracles

Outcome gradient_oracles() {
  const auto start = Clock::now();
  double worst = 0.0;
  double worst_abs = 0.0;
  int cases = 0;
  for (ModelKind kind : {ModelKind::tabular, ModelKind::mlp}) {
    for (AgentKind agent : oracle::kAllAgents) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const bool pcl = agent == AgentKind::pcl || agent == AgentKind::pcl_r;
        auto c = oracle::make_case(kind, 5000 + seed, pcl ? 1 + seed % 3 : 1);
        const LossGradient g = oracle::analytic(agent, c);
        const ParamVector fd = finite_diff_gradient(*c.model, oracle::surrogate(agent, c));
        worst = std::max(worst, oracle::max_rel_error(g.grad, fd));
        for (std::size_t i = 0; i < fd.size(); ++i) worst_abs = std::max(worst_abs, std::abs(g.grad[i] - fd[i]));
        ++cases;
      }
    }
  }
  const double secs = seconds_since(start);
  return {worst < 1e-4 && secs < 120.0, std::to_string(cases) + " cases, max rel err " + fmt("%.2e", worst) +
                                            " (max abs diff " + fmt("%.2e", worst_abs) + "), " +
                                            fmt("%.1fs", secs)};
}

Outcome soft_value_identities() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> width(1, 9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  bool bounds = true;
  for (int i = 0; i < 1000; ++i) {
    const double scale = i % 4 == 0 ? 1e6 : (i % 4 == 1 ? 1.0 : 100.0);
    const double alpha = std::pow(10.0, -2.0 + 3.0 * unit(rng));
    std::uniform_real_distribution<double> val(-scale, scale);
    QRow q;
    q.values.resize(static_cast<std::size_t>(width(rng)));
    for (double& x : q.values) x = val(rng);
    const double v = soft_state_value(q, alpha);
    const double mx = *std::max_element(q.values.begin(), q.values.end());
    const double tol = 1e-9 * std::max(1.0, std::abs(v));
    bounds &= v >= mx - tol && v <= mx + alpha * std::log(static_cast<double>(q.size())) + tol;

    const double c = val(rng);
    QRow shifted = q;
    for (double& x : shifted.values) x += c;
    worst = std::max(worst, std::abs(soft_state_value(shifted, alpha) - (v + c)) / std::max(1.0, std::abs(v + c)));
    const PolicyRow p = policy_from_q(q, alpha);
    const PolicyRow ps = policy_from_q(shifted, alpha);
    double ev = 0.0;
    for (std::size_t a = 0; a < q.size(); ++a) {
      worst = std::max(worst, std::abs(p[a] - ps[a]));
      ev += p[a] * q[a];
    }
    worst = std::max(worst, std::abs(v - (ev + alpha * policy_entropy(p))) / std::max(1.0, std::abs(v)));
  }
  return {bounds && worst <= 1e-9, "1000 rows, max scaled deviation " + fmt("%.2e", worst) +
                                       (bounds ? ", bounds hold" : ", bounds violated")};
}

Outcome normalization_invariants() {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::uniform_int_distribution<std::size_t> width(2, 9);
  double worst_sum = 0.0;
  int direction_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = width(rng);
    TabularQ model(3, n);
    for (double& p : model.params()) p = d(rng);
    const std::size_t s = static_cast<std::size_t>(i % 3);
    const std::size_t a = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    const QRow q = model.forward(Observation::discrete(s));
    const double alpha = 0.05 + std::abs(d(rng));
    const double q_hat = q[a] + (i % 2 == 0 ? 1.0 : -1.0) * (0.01 + std::abs(d(rng)));
    const NacUpstream u = nac_upstream(q, a, q_hat, soft_state_value(q, alpha), alpha);
    const ParamVector g = q_backward(model, Observation::discrete(s), u.actor);

    const std::vector<double> before(model.params().begin(), model.params().end());
    apply_update(model, g, 0.1, 1e9);
    double row_before = 0.0, row_after = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      row_before += before[s * n + b];
      row_after += model.at(s, b);
    }
    worst_sum = std::max(worst_sum, std::abs(row_after - row_before));
    // The step itself must point the right way; the stored value may absorb
    // a step far below its ulp but must never move the wrong way.
    const double sign = q_hat > q[a] ? 1.0 : -1.0;
    const PolicyRow pi = policy_from_q(q, alpha);
    for (std::size_t b = 0; b < n; ++b) {
      const double step = -0.1 * g[s * n + b];
      const double change = model.at(s, b) - before[s * n + b];
      const double want = b == a ? sign : -sign;
      if (b != a && !(pi[b] > 0.0)) continue;
      if (!(want * step > 0.0) || want * change < 0.0) ++direction_failures;
    }
    for (std::size_t other = 0; other < 3; ++other) {
      if (other == s) continue;
      for (std::size_t b = 0; b < n; ++b) direction_failures += model.at(other, b) != before[other * n + b];
    }
  }
  return {worst_sum <= 1e-12 && direction_failures == 0,
          "1000 cases, max row-sum drift " + fmt("%.2e", worst_sum) + ", direction failures " +
              std::to_string(direction_failures)};
}

// ------------------------------------------------------------- gridworld

// Held-out seeds: the gridworld settings below were chosen on seeds 0-9.
constexpr std::uint64_t kGridSeedBase = 100;

Overrides grid_overrides(const std::string& algo, std::uint64_t seed) {
  return {{"env", "gridnav"},         {"algo", algo},          {"seed", std::to_string(seed)},
          {"total_steps", "50000"},   {"k", "10000"},          {"gamma", "0.75"},
          {"alpha", "0.07"},          {"lr_start", "0.5"},     {"lr_end", "0.5"},
          {"target_period", "500"},   {"eval_interval", "50000"}, {"eval_episodes", "1"},
          {"val_size", "0"}};
}

Outcome toy_minecraft() {
  const auto start = Clock::now();
  int nac_ok = 0, dqfd_ok = 0;
  std::string paths;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const std::uint64_t seed = kGridSeedBase + i;
    for (const std::string algo : {"nac", "dqfd"}) {
      const RunConfig cfg = parse_config(std::nullopt, grid_overrides(algo, seed));
      auto env = make_environment(cfg.env);
      const auto& grid = dynamic_cast<const GridNav&>(*env);
      DemoOptions demo;
      demo.n_transitions = 10000;
      demo.epsilon = 0.0;
      demo.seed = seed;
      const DemoCorpus corpus = generate_demos(long_path_expert(grid.map()), *env, demo);

      std::size_t after_demo = 0;
      bool demo_reached = false;
      TrainingOptions opt;
      opt.on_step = [&](const StepEvent& e) {
        if (e.t != cfg.hp.k) return;
        after_demo = greedy_actions(*e.model, *env).size();
        demo_reached = evaluate_policy(*e.model, *env, 1).mean_return == 1.0;
      };
      const TrainingResult res = run_training(cfg, *env, &corpus, opt);
      const std::size_t final_len = greedy_actions(*res.model, *env).size();
      const bool final_reached = evaluate_policy(*res.model, *env, 1).mean_return == 1.0;
      const bool demo9 = demo_reached && after_demo == 9;
      if (algo == "nac") {
        nac_ok += demo9 && final_reached && final_len == 5;
        paths += std::to_string(after_demo) + "/" + (final_reached ? std::to_string(final_len) : "x") + " ";
      } else {
        dqfd_ok += demo9 && final_reached && final_len == 9;
      }
    }
  }
  const double secs = seconds_since(start);
  return {nac_ok >= 8 && dqfd_ok >= 8 && secs < 300.0,
          "NAC 9->5 in " + std::to_string(nac_ok) + "/10, DQfD 9->9 in " + std::to_string(dqfd_ok) +
              "/10, NAC demo/final lengths [" + paths.substr(0, paths.size() - 1) + "], " + fmt("%.1fs", secs)};
}

// -------------------------------------------------------------- tracksim

struct TrackSetup {
  std::unique_ptr<QModel> expert;
  double expert_return = 0.0;
};

Overrides track_overrides(const std::string& algo, std::uint64_t seed) {
  return {{"env", "tracksim"},       {"algo", algo},       {"seed", std::to_string(seed)},
          {"hidden", "64,64"},       {"eval_episodes", "1"}, {"alpha", "10"},
          {"lr_start", "1e-3"},      {"lr_end", "5e-4"},   {"target_period", "10000"}};
}

TrackSetup& track_expert() {
  static TrackSetup setup = [] {
    Overrides o = track_overrides("soft-q", 0);
    o.insert(o.end(), {{"total_steps", "300000"}, {"eval_interval", "300000"}});
    const RunConfig cfg = parse_config(std::nullopt, o);
    auto env = make_environment(cfg.env);
    TrainingResult res = train_expert(cfg, *env);
    TrackSetup s;
    s.expert_return = evaluate_policy(*res.model, *env, 1).mean_return;
    s.expert = std::move(res.model);
    return s;
  }();
  return setup;
}

DemoCorpus track_corpus(std::size_t n, double corruption, std::uint64_t seed) {
  EnvConfig ec;
  ec.id = "tracksim";
  auto env = make_environment(ec);
  DemoOptions o;
  o.n_transitions = n;
  o.epsilon = 0.01;
  o.corruption = corruption;
  o.seed = seed;
  return generate_demos(*track_expert().expert, *env, o);
}

constexpr const char* kDemoOnlySteps = "20000";

double demo_only_return(const std::string& algo, std::uint64_t seed, const DemoCorpus& corpus) {
  Overrides o = track_overrides(algo, seed);
  o.insert(o.end(), {{"k", "inf"}, {"total_steps", kDemoOnlySteps}, {"eval_interval", kDemoOnlySteps}});
  const RunConfig cfg = parse_config(std::nullopt, o);
  auto env = make_environment(cfg.env);
  const TrainingResult res = run_training(cfg, *env, &corpus);
  return evaluate_policy(*res.model, *env, 1).mean_return;
}

double random_return(std::uint64_t seed) {
  EnvConfig ec;
  ec.id = "tracksim";
  auto env = make_environment(ec);
  return evaluate_random(*env, 20, seed).mean_return;
}

Outcome demo_only_failure() {
  const auto start = Clock::now();
  int nac_ok = 0, hq_ok = 0;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DemoCorpus corpus = track_corpus(50000, 0.0, 200 + seed);
    const double rnd = random_return(seed);
    const double nac = demo_only_return("nac", seed, corpus);
    const double hq = demo_only_return("hard-q", seed, corpus);
    nac_ok += nac > 5.0 * rnd;
    hq_ok += hq <= 2.0 * rnd;
    detail += fmt("%.0f", nac) + "/" + fmt("%.0f", hq) + "/" + fmt("%.0f", rnd) + " ";
  }
  return {nac_ok >= 8 && hq_ok >= 8,
          "expert " + fmt("%.0f", track_expert().expert_return) + "; NAC>5x random in " + std::to_string(nac_ok) +
              "/10, hard-Q<=2x random in " + std::to_string(hq_ok) + "/10; nac/hq/random [" +
              detail.substr(0, detail.size() - 1) + "], " + fmt("%.1fs", seconds_since(start))};
}

Outcome corruption_robustness() {
  const auto start = Clock::now();
  double nac_clean = 0, nac_bad = 0, bc_clean = 0, bc_bad = 0;
  const int seeds = 5;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const DemoCorpus clean = track_corpus(50000, 0.0, 300 + seed);
    const DemoCorpus bad = track_corpus(50000, 0.3, 300 + seed);
    nac_clean += demo_only_return("nac", seed, clean);
    nac_bad += demo_only_return("nac", seed, bad);
    bc_clean += demo_only_return("bc", seed, clean);
    bc_bad += demo_only_return("bc", seed, bad);
  }
  nac_clean /= seeds;
  nac_bad /= seeds;
  bc_clean /= seeds;
  bc_bad /= seeds;
  const bool nac_ok = nac_bad >= 0.8 * nac_clean;
  const bool bc_ok = bc_bad < 0.7 * bc_clean;
  return {nac_ok && bc_ok, "mean over 5 seeds: NAC clean " + fmt("%.1f", nac_clean) + " corrupt " +
                               fmt("%.1f", nac_bad) + ", BC clean " + fmt("%.1f", bc_clean) + " corrupt " +
                               fmt("%.1f", bc_bad) + ", " + fmt("%.1fs", seconds_since(start))};
}

// ---------------------------------------------------------- bookkeeping

Outcome schedule_and_bookkeeping() {
  std::vector<std::string> failures;
  HyperParams hp;
  hp.total_steps = 200000;
  const std::int64_t steps[] = {0, 10000, 20000, 100000};
  const double want[] = {1e-4, 7.5e-5, 5e-5, 5e-5};
  for (int i = 0; i < 4; ++i) {
    if (std::abs(learning_rate_at(hp, steps[i]) - want[i]) > 1e-15) failures.push_back("lr@" + std::to_string(steps[i]));
  }

  const RunConfig cfg = parse_config(std::nullopt, {{"env", "gridnav"}, {"algo", "nac"}, {"total_steps", "3000"},
                                                    {"k", "1000"}, {"target_period", "250"},
                                                    {"eval_interval", "1000"}, {"eval_episodes", "1"},
                                                    {"val_size", "100"}, {"replay_capacity", "700"}});
  auto env = make_environment(cfg.env);
  const auto& grid = dynamic_cast<const GridNav&>(*env);
  DemoOptions demo;
  demo.n_transitions = 2000;
  const DemoCorpus corpus = generate_demos(long_path_expert(grid.map()), *env, demo);
  bool target_ok = true, phase_ok = true, replay_ok = true, update_ok = true;
  std::vector<double> prev_target;
  std::vector<TransitionRecord> pushed;
  TrainingOptions opt;
  opt.on_step = [&](const StepEvent& e) {
    const auto live = e.model->params();
    const auto tgt = e.target->model().params();
    std::vector<double> t(tgt.begin(), tgt.end());
    if (e.t % cfg.hp.target_period == 0) target_ok &= std::equal(live.begin(), live.end(), tgt.begin(), tgt.end());
    else if (!prev_target.empty()) target_ok &= t == prev_target;
    prev_target = std::move(t);
    phase_ok &= (e.phase == Phase::demo) == (e.t <= cfg.hp.k);
    update_ok &= e.updates == static_cast<std::size_t>(e.t);
    if (e.phase == Phase::env) {
      const std::size_t n = e.replay->size();
      pushed.push_back((*e.replay)[n - 1]);
      const std::size_t expect = std::min<std::size_t>(pushed.size(), 700);
      replay_ok &= n == expect;
      replay_ok &= (*e.replay)[0] == pushed[pushed.size() - expect];
    } else {
      replay_ok &= e.replay->empty();
    }
  };
  run_training(cfg, *env, &corpus, opt);
  if (!target_ok) failures.push_back("target sync");
  if (!phase_ok) failures.push_back("phase boundary");
  if (!replay_ok) failures.push_back("replay FIFO");
  if (!update_ok) failures.push_back("one update per step");
  for (std::int64_t k : {0, 1, 5000}) {
    for (std::int64_t t = 1; t <= 6000; ++t) {
      if ((phase_for_step({k}, t) == Phase::demo) != (t <= k)) failures.push_back("phase_for_step");
    }
  }
  if (phase_for_step({kDemoForever}, 1'000'000'000'000) != Phase::demo) failures.push_back("k=inf");

  std::string detail = "lr {1e-4,7.5e-5,5e-5,5e-5}, target sync every T, t<=k boundary, FIFO capacity 700";
  if (!failures.empty()) {
    detail = "failed:";
    for (const auto& f : failures) detail += " " + f;
  }
  return {failures.empty(), detail};
}

Outcome determinism() {
  const fs::path dir = work_dir() / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::vector<std::string> mismatched;

  auto run_twice = [&](const std::string& name, const Overrides& o, const DemoCorpus* corpus) {
    const RunConfig cfg = parse_config(std::nullopt, o);
    auto env = make_environment(cfg.env);
    for (const char* tag : {"a", "b"}) {
      TrainingOptions opt;
      opt.metrics_path = dir / (name + "_" + tag + ".csv");
      run_training(cfg, *env, corpus, opt);
    }
    if (slurp(dir / (name + "_a.csv")) != slurp(dir / (name + "_b.csv"))) mismatched.push_back(name);
  };

  EnvConfig grid_cfg;
  auto grid = make_environment(grid_cfg);
  DemoOptions demo;
  demo.n_transitions = 3000;
  demo.epsilon = 0.1;
  demo.seed = 5;
  const DemoCorpus grid_corpus =
      generate_demos(long_path_expert(dynamic_cast<const GridNav&>(*grid).map()), *grid, demo);
  for (const char* algo : {"nac", "nac-is", "soft-q", "hard-q", "dqfd", "bc", "pcl", "pcl-r"}) {
    run_twice(std::string("grid_") + algo,
              {{"algo", algo}, {"seed", "3"}, {"total_steps", "4000"}, {"k", "1500"},
               {"eval_interval", "500"}, {"eval_episodes", "2"}, {"val_size", "300"}},
              &grid_corpus);
  }

  EnvConfig track_cfg;
  track_cfg.id = "tracksim";
  auto track = make_environment(track_cfg);
  MlpShape shape;
  shape.input = 28;
  shape.hidden = {16};
  shape.output = 9;
  DemoOptions tdemo;
  tdemo.n_transitions = 2000;
  tdemo.epsilon = 0.3;
  tdemo.corruption = 0.2;
  tdemo.seed = 9;
  const DemoCorpus track_corpus = generate_demos(MlpQ(shape, 4), *track, tdemo);
  run_twice("track_nac", {{"env", "tracksim"}, {"algo", "nac"}, {"seed", "3"}, {"total_steps", "1500"},
                          {"k", "500"}, {"hidden", "32,32"}, {"eval_interval", "500"}, {"eval_episodes", "1"},
                          {"val_size", "200"}, {"target_period", "300"}},
            &track_corpus);

  std::string detail = "9 configurations (8 gridnav algorithms, 1 tracksim) byte-identical across two runs";
  if (!mismatched.empty()) {
    detail = "differing CSVs:";
    for (const auto& m : mismatched) detail += " " + m;
  }
  return {mismatched.empty(), detail};
}

Outcome corpus_checks() {
  std::vector<std::string> failures;
  std::string rates;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EnvConfig ec;
    ec.id = "tracksim";
    auto env = make_environment(ec);
    MlpShape shape;
    shape.input = 28;
    shape.hidden = {8};
    shape.output = 9;
    DemoOptions o;
    o.n_transitions = 3000 + 500 * seed;
    o.epsilon = 0.05 * static_cast<double>(seed);
    o.corruption = 0.1 * static_cast<double>(seed);
    o.seed = seed;
    const DemoCorpus c = generate_demos(MlpQ(shape, seed), *env, o);
    std::ostringstream out;
    write_corpus(c, out);
    std::istringstream in(out.str());
    const DemoCorpus back = read_corpus(in);
    std::ostringstream again;
    write_corpus(back, again);
    if (!(back == c) || again.str() != out.str()) failures.push_back("round trip seed " + std::to_string(seed));
  }
  {
    const DemoCorpus g = [] {
      GridNav env(GridMap::default_map());
      DemoOptions o;
      o.n_transitions = 4000;
      o.epsilon = 0.2;
      o.corruption = 0.4;
      o.seed = 11;
      return generate_demos(long_path_expert(GridMap::default_map()), env, o);
    }();
    const fs::path p = work_dir() / "grid_corpus.jsonl";
    write_corpus(g, p);
    if (!(read_corpus(p) == g)) failures.push_back("gridnav file round trip");
  }
  const std::size_t n = 10000;
  for (double p : {0.3, 0.5, 0.8}) {
    GridNav env(GridMap::default_map());
    DemoOptions o;
    o.n_transitions = n;
    o.epsilon = 0.01;
    o.corruption = p;
    o.seed = static_cast<std::uint64_t>(p * 100);
    const DemoCorpus c = generate_demos(long_path_expert(GridMap::default_map()), env, o);
    const double frac = corpus_stats(c, 0).corrupted_fraction;
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    if (std::abs(frac - p) > 3.0 * sigma) failures.push_back("rate " + fmt("%.1f", p));
    rates += fmt("%.1f", p) + "->" + fmt("%.4f", frac) + " ";
  }
  std::string detail = "6 corpora round-trip byte-identical; corrupted fractions " + rates.substr(0, rates.size() - 1);
  if (!failures.empty()) {
    detail = "failed:";
    for (const auto& f : failures) detail += " " + f;
  }
  return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gradient-oracles", gradient_oracles},
      {"soft-value-identities", soft_value_identities},
      {"normalization-invariants", normalization_invariants},
      {"schedule-bookkeeping", schedule_and_bookkeeping},
      {"determinism", determinism},
      {"corpus-roundtrip-corruption-rate", corpus_checks},
      {"toy-minecraft", toy_minecraft},
      {"demo-only-q-learning-failure", demo_only_failure},
      {"corruption-robustness", corruption_robustness},
  };
  // Optional filter: run only the named criteria.
  std::vector<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
