#include "nac/corpus.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "nac/errors.hpp"

namespace nac {
namespace {

using json = nlohmann::ordered_json;

json obs_to_json(const Observation& obs) {
  if (obs.is_discrete()) return obs.index();
  const auto f = obs.features();
  return json(std::vector<double>(f.begin(), f.end()));
}

Observation obs_from_json(const json& j) {
  if (j.is_number_unsigned()) return Observation::discrete(j.get<std::size_t>());
  if (j.is_array()) {
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) {
      if (!x.is_number()) throw FormatError("feature observation holds a non-number");
      v.push_back(x.get<double>());
    }
    return Observation::features(std::move(v));
  }
  throw FormatError("observation must be a non-negative integer or an array of reals");
}

json spec_to_json(const ObservationSpec& spec) {
  return json{{"kind", spec.kind == ObservationSpec::Kind::discrete ? "discrete" : "features"},
              {"size", spec.size}};
}

ObservationSpec spec_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  ObservationSpec spec;
  if (kind == "discrete") {
    spec.kind = ObservationSpec::Kind::discrete;
  } else if (kind == "features") {
    spec.kind = ObservationSpec::Kind::features;
  } else {
    throw FormatError("unknown observation kind '" + kind + "'");
  }
  spec.size = j.at("size").get<std::size_t>();
  return spec;
}

json header_to_json(const CorpusHeader& h) {
  return json{{"version", h.version},       {"env", h.env},
              {"n_actions", h.n_actions},   {"obs", spec_to_json(h.obs)},
              {"generator", h.generator},   {"corruption", h.corruption},
              {"seed", h.seed}};
}

json record_to_json(const TransitionRecord& r) {
  return json{{"episode", r.episode},
              {"t", r.t},
              {"obs", obs_to_json(r.obs)},
              {"action", r.action},
              {"reward", r.reward},
              {"next_obs", obs_to_json(r.next_obs)},
              {"done", r.done},
              {"behavior_prob", r.behavior_prob},
              {"corrupted", r.corrupted}};
}

TransitionRecord record_from_json(const json& j) {
  TransitionRecord r;
  r.episode = j.at("episode").get<std::int64_t>();
  r.t = j.at("t").get<std::int64_t>();
  r.obs = obs_from_json(j.at("obs"));
  r.action = j.at("action").get<std::size_t>();
  r.reward = j.at("reward").get<double>();
  r.next_obs = obs_from_json(j.at("next_obs"));
  r.done = j.at("done").get<bool>();
  r.behavior_prob = j.at("behavior_prob").get<double>();
  r.corrupted = j.at("corrupted").get<bool>();
  return r;
}

void check_record(const CorpusHeader& h, const TransitionRecord& r, const std::string& where) {
  if (!h.obs.matches(r.obs) || !h.obs.matches(r.next_obs)) {
    throw FormatError(where + ": observation does not match header " + h.obs.describe());
  }
  if (r.action >= h.n_actions) throw FormatError(where + ": action out of range");
  if (!std::isfinite(r.reward)) throw FormatError(where + ": non-finite reward");
  if (!(r.behavior_prob > 0.0 && r.behavior_prob <= 1.0)) {
    throw FormatError(where + ": behavior_prob must lie in (0, 1]");
  }
}

}  // namespace

void validate_corpus(const DemoCorpus& corpus) {
  const CorpusHeader& h = corpus.header;
  if (h.version != kCorpusVersion) {
    throw FormatError("unsupported corpus version " + std::to_string(h.version));
  }
  if (h.n_actions == 0) throw FormatError("corpus header declares zero actions");
  std::set<std::int64_t> finished;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    const TransitionRecord& r = corpus.records[i];
    const std::string where = "record " + std::to_string(i);
    check_record(h, r, where);
    if (i == 0 || corpus.records[i - 1].episode != r.episode) {
      if (i > 0) finished.insert(corpus.records[i - 1].episode);
      if (finished.contains(r.episode)) {
        throw FormatError(where + ": episode " + std::to_string(r.episode) + " is not contiguous");
      }
      continue;
    }
    const TransitionRecord& prev = corpus.records[i - 1];
    if (prev.done) throw FormatError(where + ": episode continues after a terminal record");
    if (r.t != prev.t + 1) throw FormatError(where + ": step index does not follow its predecessor");
    if (!(r.obs == prev.next_obs)) {
      throw FormatError(where + ": obs differs from the previous record's next_obs");
    }
  }
}

void write_corpus(const DemoCorpus& corpus, std::ostream& out) {
  out << header_to_json(corpus.header).dump() << '\n';
  for (const auto& r : corpus.records) out << record_to_json(r).dump() << '\n';
  if (!out) throw std::runtime_error("failed to write corpus");
}

void write_corpus(const DemoCorpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open corpus for writing: " + path.string());
  write_corpus(corpus, out);
}

DemoCorpus read_corpus(std::istream& in) {
  DemoCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
    }
    try {
      if (!have_header) {
        CorpusHeader& h = corpus.header;
        h.version = j.at("version").get<int>();
        if (h.version != kCorpusVersion) {
          throw FormatError("unsupported corpus version " + std::to_string(h.version));
        }
        h.env = j.at("env").get<std::string>();
        h.n_actions = j.at("n_actions").get<std::size_t>();
        h.obs = spec_from_json(j.at("obs"));
        h.generator = j.value("generator", "");
        h.corruption = j.value("corruption", 0.0);
        h.seed = j.value("seed", std::uint64_t{0});
        have_header = true;
        continue;
      }
      TransitionRecord r = record_from_json(j);
      check_record(corpus.header, r, "line " + std::to_string(line_no));
      corpus.records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("bad field: ") + e.what());
    }
  }
  if (!have_header) throw ParseError(line_no + 1, "missing corpus header");
  validate_corpus(corpus);
  return corpus;
}

DemoCorpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus: " + path.string());
  return read_corpus(in);
}

CorpusSplit split_validation(const DemoCorpus& corpus, std::size_t validation_size) {
  const std::span<const TransitionRecord> all(corpus.records);
  const std::size_t val = std::min(validation_size, all.size());
  return {all.first(all.size() - val), all.last(val)};
}

CorpusStats corpus_stats(const DemoCorpus& corpus, std::size_t validation_size) {
  CorpusStats stats;
  stats.transitions = corpus.records.size();
  std::vector<double> returns;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    const auto& r = corpus.records[i];
    if (i == 0 || corpus.records[i - 1].episode != r.episode) returns.push_back(0.0);
    returns.back() += r.reward;
    if (r.corrupted) ++stats.corrupted;
  }
  stats.episodes = returns.size();
  if (!returns.empty()) {
    double sum = 0.0;
    for (double g : returns) sum += g;
    stats.mean_return = sum / static_cast<double>(returns.size());
    double var = 0.0;
    for (double g : returns) var += (g - stats.mean_return) * (g - stats.mean_return);
    stats.std_return = std::sqrt(var / static_cast<double>(returns.size()));
  }
  if (stats.transitions > 0) {
    stats.corrupted_fraction =
        static_cast<double>(stats.corrupted) / static_cast<double>(stats.transitions);
  }
  const auto split = split_validation(corpus, validation_size);
  stats.train_size = split.train.size();
  stats.validation_size = split.validation.size();
  return stats;
}

}  // namespace nac
