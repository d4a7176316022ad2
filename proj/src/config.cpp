#include "nac/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "nac/errors.hpp"
#include "nac/tabular_q.hpp"

namespace nac {

namespace {

std::string num(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw ConfigError("invalid value for '" + key + "': '" + value + "' (expected " + expected + ")");
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  // Accept 1e6-style literals as long as they are integral.
  std::int64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec == std::errc{} && p == v.data() + v.size()) return out;
  const double d = to_double(key, v);
  if (d != static_cast<double>(static_cast<std::int64_t>(d))) bad_value(key, v, "an integer");
  return static_cast<std::int64_t>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true or false");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

template <typename T>
Setter real(T HyperParams::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.hp.*field = to_double(k, v);
  };
}

template <typename T>
Setter integer(T HyperParams::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.hp.*field = static_cast<T>(to_int(k, v));
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"alpha", real(&HyperParams::alpha)},
      {"gamma", real(&HyperParams::gamma)},
      {"k",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.hp.k = (v == "inf" || v == "forever") ? kDemoForever : to_int(k, v);
       }},
      {"target_period", integer(&HyperParams::target_period)},
      {"lr_start", real(&HyperParams::lr_start)},
      {"lr_end", real(&HyperParams::lr_end)},
      {"anneal_fraction", real(&HyperParams::anneal_fraction)},
      {"clip_norm", real(&HyperParams::clip_norm)},
      {"clip_mode",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "global_norm") c.hp.clip_mode = ClipMode::global_norm;
         else if (v == "per_element") c.hp.clip_mode = ClipMode::per_element;
         else bad_value(k, v, "global_norm or per_element");
       }},
      {"batch_size", integer(&HyperParams::batch_size)},
      {"c", real(&HyperParams::c)},
      {"epsilon_explore", real(&HyperParams::epsilon_explore)},
      {"margin", real(&HyperParams::margin)},
      {"lambda_hinge", real(&HyperParams::lambda_hinge)},
      {"lambda_wd", real(&HyperParams::lambda_wd)},
      {"pcl_rollout", integer(&HyperParams::pcl_rollout)},
      {"rho_demo", real(&HyperParams::rho_demo)},
      {"total_steps", integer(&HyperParams::total_steps)},
      {"eval_interval", integer(&HyperParams::eval_interval)},
      {"eval_episodes", integer(&HyperParams::eval_episodes)},
      {"seed",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::int64_t s = to_int(k, v);
         if (s < 0) bad_value(k, v, "a non-negative integer");
         c.hp.seed = static_cast<std::uint64_t>(s);
       }},
      {"replay_capacity", integer(&HyperParams::replay_capacity)},
      {"val_size", integer(&HyperParams::val_size)},
      {"env", [](RunConfig& c, const std::string&, const std::string& v) { c.env.id = v; }},
      {"map",
       [](RunConfig& c, const std::string&, const std::string& v) {
         if (v.empty()) c.env.map_path.reset();
         else c.env.map_path = v;
       }},
      {"grid_max_steps",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::int64_t n = to_int(k, v);
         if (n < 1) bad_value(k, v, "a positive integer");
         c.env.grid_max_steps = static_cast<std::size_t>(n);
       }},
      {"reward",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "footnote") c.env.reward = RewardVariant::footnote;
         else if (v == "speed_squared") c.env.reward = RewardVariant::speed_squared;
         else bad_value(k, v, "footnote or speed_squared");
       }},
      {"abs_sin",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.env.abs_sin = to_bool(k, v); }},
      {"frame_stack",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::int64_t n = to_int(k, v);
         if (n < 1) bad_value(k, v, "a positive integer");
         c.env.frame_stack = static_cast<std::size_t>(n);
       }},
      {"algo",
       [](RunConfig& c, const std::string&, const std::string& v) { c.algo = parse_agent(v); }},
      {"hidden",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         std::vector<std::size_t> widths;
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) {
           const std::int64_t w = to_int(k, trim(item));
           if (w < 1) bad_value(k, v, "comma-separated positive widths");
           widths.push_back(static_cast<std::size_t>(w));
         }
         c.hidden = std::move(widths);
       }},
      {"activation",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "relu") c.activation = Activation::relu;
         else if (v == "tanh") c.activation = Activation::tanh;
         else bad_value(k, v, "relu or tanh");
       }},
      {"demos",
       [](RunConfig& c, const std::string&, const std::string& v) {
         if (v.empty()) c.demos.reset();
         else c.demos = v;
       }},
      {"out", [](RunConfig& c, const std::string&, const std::string& v) { c.out = v; }},
  };
  return table;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

Overrides env_preset(const std::string& env_id) {
  if (env_id == "gridnav") {
    return {{"total_steps", "50000"}, {"k", "10000"}, {"target_period", "500"},
            {"gamma", "0.75"},        {"alpha", "0.07"},
            {"lr_start", "0.5"},     {"lr_end", "0.5"}};
  }
  if (env_id == "tracksim") {
    return {{"total_steps", "300000"}, {"k", "100000"}, {"target_period", "10000"}};
  }
  return {};
}

Overrides read_config_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file '" + file.string() + "'");
  Overrides out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(file.string() + ":" + std::to_string(n) + ": expected 'key = value'");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

std::map<std::string, std::string> config_snapshot(const RunConfig& c) {
  const HyperParams& hp = c.hp;
  std::map<std::string, std::string> m;
  m["alpha"] = num(hp.alpha);
  m["gamma"] = num(hp.gamma);
  m["k"] = hp.k == kDemoForever ? "inf" : std::to_string(hp.k);
  m["target_period"] = std::to_string(hp.target_period);
  m["lr_start"] = num(hp.lr_start);
  m["lr_end"] = num(hp.lr_end);
  m["anneal_fraction"] = num(hp.anneal_fraction);
  m["clip_norm"] = num(hp.clip_norm);
  m["clip_mode"] = hp.clip_mode == ClipMode::global_norm ? "global_norm" : "per_element";
  m["batch_size"] = std::to_string(hp.batch_size);
  m["c"] = num(hp.c);
  m["epsilon_explore"] = num(hp.epsilon_explore);
  m["margin"] = num(hp.margin);
  m["lambda_hinge"] = num(hp.lambda_hinge);
  m["lambda_wd"] = num(hp.lambda_wd);
  m["pcl_rollout"] = std::to_string(hp.pcl_rollout);
  m["rho_demo"] = num(hp.rho_demo);
  m["total_steps"] = std::to_string(hp.total_steps);
  m["eval_interval"] = std::to_string(hp.eval_interval);
  m["eval_episodes"] = std::to_string(hp.eval_episodes);
  m["seed"] = std::to_string(hp.seed);
  m["replay_capacity"] = std::to_string(hp.replay_capacity);
  m["val_size"] = std::to_string(hp.val_size);
  m["env"] = c.env.id;
  m["map"] = c.env.map_path.value_or("");
  m["grid_max_steps"] = std::to_string(c.env.grid_max_steps);
  m["reward"] = c.env.reward == RewardVariant::footnote ? "footnote" : "speed_squared";
  m["abs_sin"] = c.env.abs_sin ? "true" : "false";
  m["frame_stack"] = std::to_string(c.env.frame_stack);
  m["algo"] = std::string(agent_name(c.algo));
  m["hidden"] = join(c.hidden);
  m["activation"] = c.activation == Activation::relu ? "relu" : "tanh";
  m["demos"] = c.demos.value_or("");
  m["out"] = c.out;
  return m;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file, const Overrides& overrides) {
  Overrides layered;
  if (file) layered = read_config_file(*file);
  layered.insert(layered.end(), overrides.begin(), overrides.end());

  const auto& table = setters();
  std::string env_id = "gridnav";
  for (const auto& [k, v] : layered) {
    if (!table.contains(k)) throw ConfigError("unknown config key '" + k + "'");
    if (k == "env") env_id = v;
  }

  RunConfig config;
  const auto apply = [&](const std::string& k, const std::string& v) {
    table.at(k)(config, k, v);
  };
  apply("env", env_id);
  for (const auto& [k, v] : env_preset(env_id)) apply(k, v);
  for (const auto& [k, v] : layered) apply(k, v);
  config.hp.validate();
  if (config.env.id != "gridnav" && config.env.id != "tracksim") {
    throw ConfigError("invalid value for 'env': '" + config.env.id + "' (expected gridnav or tracksim)");
  }
  config.resolved = config_snapshot(config);
  return config;
}

std::unique_ptr<QModel> make_model(const RunConfig& config, const Environment& env) {
  const ObservationSpec spec = env.observation_spec();
  if (spec.kind == ObservationSpec::Kind::discrete) {
    return std::make_unique<TabularQ>(spec.size, env.num_actions());
  }
  MlpShape shape;
  shape.input = spec.size;
  shape.hidden = config.hidden;
  shape.output = env.num_actions();
  shape.activation = config.activation;
  shape.frame_stack = config.env.frame_stack;
  return std::make_unique<MlpQ>(shape, config.hp.seed);
}

}  // namespace nac
