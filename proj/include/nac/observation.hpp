#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace nac {

// What an agent sees: a discrete state index (gridworld) or a stacked real
// feature vector (track simulator).
class Observation {
 public:
  Observation() : value_(std::size_t{0}) {}
  static Observation discrete(std::size_t index) { return Observation(index); }
  static Observation features(std::vector<double> values) { return Observation(std::move(values)); }

  bool is_discrete() const noexcept { return std::holds_alternative<std::size_t>(value_); }
  // Throws InvalidArgument when the other representation is active.
  std::size_t index() const;
  std::span<const double> features() const;
  // 1 for discrete observations, feature count otherwise.
  std::size_t width() const noexcept;

  friend bool operator==(const Observation&, const Observation&) = default;

 private:
  explicit Observation(std::size_t index) : value_(index) {}
  explicit Observation(std::vector<double> values) : value_(std::move(values)) {}

  std::variant<std::size_t, std::vector<double>> value_;
};

// Describes the observation space so files and models can check shapes.
struct ObservationSpec {
  enum class Kind { discrete, features };
  Kind kind = Kind::discrete;
  std::size_t size = 0;  // state count for discrete, feature width otherwise

  bool matches(const Observation& obs) const;
  std::string describe() const;
  friend bool operator==(const ObservationSpec&, const ObservationSpec&) = default;
};

enum class Source : std::uint8_t { demo, env };

// One (s, a, r, s', done) sample with the probability the behavior policy
// assigned to the executed action.
struct TransitionRecord {
  std::int64_t episode = 0;
  std::int64_t t = 0;
  Observation obs;
  std::size_t action = 0;
  double reward = 0.0;
  Observation next_obs;
  bool done = false;
  double behavior_prob = 1.0;
  bool corrupted = false;

  friend bool operator==(const TransitionRecord&, const TransitionRecord&) = default;
};

}  // namespace nac
