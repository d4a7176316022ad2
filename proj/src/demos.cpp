#include "nac/demos.hpp"

#include <deque>
#include <istream>
#include <limits>
#include <ostream>

#include "nac/errors.hpp"
#include "nac/soft_math.hpp"
#include "nac/tracksim.hpp"

namespace nac {

double demo_behavior_prob(const QRow& expert_q, std::size_t action, double epsilon,
                          double corruption) {
  const std::size_t best = argmax_lowest(expert_q.values);
  const std::size_t worst = argmin_lowest(expert_q.values);
  const double n = static_cast<double>(expert_q.size());
  const double base = (action == best ? 1.0 - epsilon : 0.0) + epsilon / n;
  return (1.0 - corruption) * base + (action == worst ? corruption : 0.0);
}

DemoCorpus generate_demos(const QModel& expert, Environment& env, const DemoOptions& options) {
  if (!(expert.input_spec() == env.observation_spec()) || expert.num_actions() != env.num_actions()) {
    throw ConfigError("expert checkpoint does not fit environment '" + std::string(env.id()) + "'");
  }
  if (options.epsilon < 0.0 || options.epsilon > 1.0 || options.corruption < 0.0 ||
      options.corruption > 1.0) {
    throw ConfigError("epsilon and corruption rate must lie in [0, 1]");
  }
  DemoCorpus corpus;
  corpus.header.env = std::string(env.id());
  corpus.header.n_actions = env.num_actions();
  corpus.header.obs = env.observation_spec();
  corpus.header.generator = options.generator;
  corpus.header.corruption = options.corruption;
  corpus.header.seed = options.seed;
  corpus.records.reserve(options.n_transitions);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> any_action(0, env.num_actions() - 1);

  std::int64_t episode = 0;
  while (corpus.records.size() < options.n_transitions) {
    Observation obs = env.reset();
    for (std::int64_t t = 0; !env.done() && corpus.records.size() < options.n_transitions; ++t) {
      const QRow q = expert.forward(obs);
      std::size_t action = argmax_lowest(q.values);
      if (unit(rng) < options.epsilon) action = any_action(rng);
      bool corrupted = false;
      if (unit(rng) < options.corruption) {
        action = argmin_lowest(q.values);
        corrupted = true;
      }
      StepResult step = env.step(action);
      TransitionRecord rec;
      rec.episode = episode;
      rec.t = t;
      rec.obs = std::move(obs);
      rec.action = action;
      rec.reward = step.reward;
      rec.next_obs = step.obs;
      rec.done = step.done;
      rec.behavior_prob = demo_behavior_prob(q, action, options.epsilon, options.corruption);
      rec.corrupted = corrupted;
      corpus.records.push_back(std::move(rec));
      obs = std::move(step.obs);
    }
    ++episode;
  }
  return corpus;
}

TabularQ long_path_expert(const GridMap& map) {
  const std::size_t rows = map.rows();
  const std::size_t cols = map.cols();
  const std::size_t sr = map.start_row();
  std::size_t goal = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (map.at(r, c) == 'H') goal = map.index(r, c);
    }
  }
  const std::size_t gr = goal / cols;
  const std::size_t gc = goal % cols;
  const std::size_t lo = std::min(map.start_col(), gc);
  const std::size_t hi = std::max(map.start_col(), gc);
  auto shortcut = [&](std::size_t r, std::size_t c) {
    return r == sr && gr == sr && c > lo && c < hi;
  };
  auto passable = [&](std::size_t r, std::size_t c) {
    return map.at(r, c) != 'W' && !shortcut(r, c);
  };

  // Breadth-first distances to H over the allowed cells.
  constexpr std::size_t kFar = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(map.num_cells(), kFar);
  std::deque<std::size_t> queue{goal};
  dist[goal] = 0;
  const int dr[4] = {-1, 1, 0, 0};
  const int dc[4] = {0, 0, -1, 1};
  while (!queue.empty()) {
    const std::size_t cell = queue.front();
    queue.pop_front();
    const auto r = static_cast<int>(cell / cols);
    const auto c = static_cast<int>(cell % cols);
    for (int a = 0; a < 4; ++a) {
      const int nr = r + dr[a];
      const int nc = c + dc[a];
      if (nr < 0 || nc < 0 || nr >= static_cast<int>(rows) || nc >= static_cast<int>(cols)) continue;
      const auto ur = static_cast<std::size_t>(nr);
      const auto uc = static_cast<std::size_t>(nc);
      if (!passable(ur, uc) || dist[map.index(ur, uc)] != kFar) continue;
      dist[map.index(ur, uc)] = dist[cell] + 1;
      queue.push_back(map.index(ur, uc));
    }
  }

  TabularQ table(map.num_cells(), GridNav::kNumActions);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::size_t chosen = 0;
      if (shortcut(r, c)) {
        // Walk back toward S to rejoin the long route.
        chosen = static_cast<std::size_t>(c > map.start_col() ? GridAction::left : GridAction::right);
      } else {
        std::size_t best = kFar;
        for (std::size_t a = 0; a < 4; ++a) {
          const int nr = static_cast<int>(r) + dr[a];
          const int nc = static_cast<int>(c) + dc[a];
          if (nr < 0 || nc < 0 || nr >= static_cast<int>(rows) || nc >= static_cast<int>(cols)) continue;
          const std::size_t d = dist[map.index(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc))];
          if (d < best) {
            best = d;
            chosen = a;
          }
        }
      }
      table.at(map.index(r, c), chosen) = 1.0;
    }
  }
  return table;
}

KeyBindings KeyBindings::gridnav() {
  KeyBindings b;
  const std::pair<const char*, GridAction> keys[] = {
      {"w", GridAction::up},      {"s", GridAction::down},  {"a", GridAction::left},
      {"d", GridAction::right},   {"up", GridAction::up},   {"down", GridAction::down},
      {"left", GridAction::left}, {"right", GridAction::right}};
  for (const auto& [k, a] : keys) b.keys[k] = static_cast<std::size_t>(a);
  b.help = "w/a/s/d (or up/left/down/right) to move, q to quit";
  return b;
}

KeyBindings KeyBindings::tracksim() {
  KeyBindings b;
  const std::pair<std::string, int> steer[] = {{"", 0}, {"a", -1}, {"d", 1}};
  const std::pair<std::string, int> accel[] = {{"", 0}, {"w", 1}, {"s", -1}};
  for (const auto& [sk, sv] : steer) {
    for (const auto& [ak, av] : accel) {
      const std::size_t action = encode_drive_action({sv, av});
      b.keys[sk + ak] = action;
      b.keys[ak + sk] = action;
    }
  }
  b.keys["."] = encode_drive_action({0, 0});
  b.help = "combine a/d (steer) with w/s (throttle), '.' or empty line for no-op, q to quit";
  return b;
}

KeyBindings KeyBindings::for_env(std::string_view env_id) {
  if (env_id == "gridnav") return gridnav();
  if (env_id == "tracksim") return tracksim();
  throw ConfigError("no key bindings for environment '" + std::string(env_id) + "'");
}

std::optional<std::size_t> KeyBindings::lookup(const std::string& token) const {
  auto it = keys.find(token);
  if (it == keys.end()) return std::nullopt;
  return it->second;
}

DemoCorpus record_interactive(Environment& env, const KeyBindings& bindings, std::istream& in,
                              std::ostream& out) {
  DemoCorpus corpus;
  corpus.header.env = std::string(env.id());
  corpus.header.n_actions = env.num_actions();
  corpus.header.obs = env.observation_spec();
  corpus.header.generator = "human";
  const double mu = 1.0 / static_cast<double>(env.num_actions());

  out << bindings.help << '\n';
  std::int64_t episode = 0;
  std::int64_t t = 0;
  double episode_return = 0.0;
  Observation obs = env.reset();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "q") break;
    const auto action = bindings.lookup(line);
    if (!action) {
      out << "unrecognized input '" << line << "'; " << bindings.help << '\n';
      continue;
    }
    StepResult step = env.step(*action);
    TransitionRecord rec;
    rec.episode = episode;
    rec.t = t++;
    rec.obs = std::move(obs);
    rec.action = *action;
    rec.reward = step.reward;
    rec.next_obs = step.obs;
    rec.done = step.done;
    rec.behavior_prob = mu;
    corpus.records.push_back(std::move(rec));
    episode_return += step.reward;
    out << "t=" << t << " reward=" << step.reward << (step.done ? " done" : "") << '\n';
    obs = std::move(step.obs);
    if (step.done) {
      out << "episode " << episode << " return " << episode_return << '\n';
      ++episode;
      t = 0;
      episode_return = 0.0;
      obs = env.reset();
    }
  }
  return corpus;
}

}  // namespace nac
