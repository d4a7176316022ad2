#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "nac/corpus.hpp"
#include "nac/environment.hpp"
#include "nac/gridnav.hpp"
#include "nac/q_model.hpp"
#include "nac/tabular_q.hpp"

namespace nac {

struct DemoOptions {
  std::size_t n_transitions = 0;
  double epsilon = 0.01;     // uniform random action probability
  double corruption = 0.0;   // probability of executing argmin_a Q instead
  std::uint64_t seed = 0;
  std::string generator = "expert";
};

/// Rolls the expert in env until n_transitions records exist (the final
/// episode may be cut short). Per step: greedy expert action, replaced by a
/// uniform action with probability epsilon, then independently replaced by
/// argmin_a Q(s, a) with probability corruption (flagged). Corruption is
/// applied online, so it shapes the states that follow. behavior_prob is the
/// full mixture probability of the executed action.
/// Throws ConfigError if the expert does not fit the environment.
DemoCorpus generate_demos(const QModel& expert, Environment& env, const DemoOptions& options);

/// Probability the demo generator assigns to `action` given the expert row.
double demo_behavior_prob(const QRow& expert_q, std::size_t action, double epsilon,
                          double corruption);

/// Scripted suboptimal expert for gridworlds: the shortest route to H that
/// never uses the cells of S's row lying between S and H. Encoded as a table
/// with 1 on the scripted action and 0 elsewhere. On the default map this is
/// Down, Down, Right x5, Up, Up.
TabularQ long_path_expert(const GridMap& map);

// Maps one line of terminal input to an action.
struct KeyBindings {
  std::map<std::string, std::size_t> keys;
  std::string help;

  // w/s/a/d (or up/down/left/right) for the gridworld.
  static KeyBindings gridnav();
  // Any combination of one of {a, d} (left/right) and one of {w, s}
  // (up/down); "." or an empty line is the no-op.
  static KeyBindings tracksim();
  static KeyBindings for_env(std::string_view env_id);

  std::optional<std::size_t> lookup(const std::string& token) const;
};

/// Line-driven recording session: each input line is one control step, "q"
/// (or end of input) quits. Terminal steps start a new episode. The human
/// policy is unknown, so behavior_prob is 1 / |A| on every record.
DemoCorpus record_interactive(Environment& env, const KeyBindings& bindings, std::istream& in,
                              std::ostream& out);

}  // namespace nac
