#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nac/observation.hpp"

namespace nac {

inline constexpr int kCorpusVersion = 1;

struct CorpusHeader {
  int version = kCorpusVersion;
  std::string env;
  std::size_t n_actions = 0;
  ObservationSpec obs;
  std::string generator;
  double corruption = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const CorpusHeader&, const CorpusHeader&) = default;
};

struct DemoCorpus {
  CorpusHeader header;
  std::vector<TransitionRecord> records;

  friend bool operator==(const DemoCorpus&, const DemoCorpus&) = default;
};

// Line-delimited JSON: a header object, then one object per transition.
// Doubles are written in shortest round-trip form, so write/read is lossless.
void write_corpus(const DemoCorpus& corpus, std::ostream& out);
void write_corpus(const DemoCorpus& corpus, const std::filesystem::path& path);

// Throws ParseError (with the 1-based line number) on malformed JSON and
// FormatError on version, shape, or episode-chaining violations.
DemoCorpus read_corpus(std::istream& in);
DemoCorpus read_corpus(const std::filesystem::path& path);

// Checks shapes, probability ranges and within-episode chaining.
void validate_corpus(const DemoCorpus& corpus);

struct CorpusSplit {
  std::span<const TransitionRecord> train;
  std::span<const TransitionRecord> validation;
};

// Deterministic split: the last `validation_size` records (capped at the
// corpus size) are held out.
CorpusSplit split_validation(const DemoCorpus& corpus, std::size_t validation_size);

struct CorpusStats {
  std::size_t transitions = 0;
  std::size_t episodes = 0;
  double mean_return = 0.0;
  double std_return = 0.0;  // population
  double corrupted_fraction = 0.0;
  std::size_t corrupted = 0;
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
};

CorpusStats corpus_stats(const DemoCorpus& corpus, std::size_t validation_size);

}  // namespace nac
