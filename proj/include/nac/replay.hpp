#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "nac/agents.hpp"
#include "nac/observation.hpp"

namespace nac {

inline constexpr std::size_t kDefaultReplayCapacity = 1'000'000;

// Fixed-capacity ring of transitions with strict FIFO eviction.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = kDefaultReplayCapacity);

  // Throws InvalidArgument if the record's observation shape differs from
  // the first record ever pushed.
  void push(TransitionRecord record);

  std::size_t size() const noexcept { return storage_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return storage_.empty(); }
  std::uint64_t inserted() const noexcept { return inserted_; }

  // i = 0 is the oldest retained record.
  const TransitionRecord& operator[](std::size_t i) const;

 private:
  std::size_t capacity_;
  std::vector<TransitionRecord> storage_;
  std::size_t head_ = 0;  // slot of the oldest record once full
  std::uint64_t inserted_ = 0;
  std::optional<std::pair<bool, std::size_t>> shape_;
};

// Uniform with replacement; every record is tagged with `source`.
// Throws StateError on an empty source.
Batch sample_batch(std::span<const TransitionRecord> source, Source tag, std::size_t batch_size,
                   std::mt19937_64& rng);
Batch sample_batch(const ReplayBuffer& buffer, std::size_t batch_size, std::mt19937_64& rng);

// demo_count records from demos, the rest from buffer. If buffer is empty
// the whole batch comes from demos.
Batch sample_mixed(std::span<const TransitionRecord> demos, const ReplayBuffer& buffer,
                   std::size_t batch_size, double demo_fraction, std::mt19937_64& rng);

// Contiguous sub-trajectories of up to `length` records that stay inside one
// episode. Start indices are uniform over the source; a path stops early
// only at an episode-terminal record or at the source end of a truncated
// episode (in which case its start is redrawn).
PathBatch sample_paths(std::span<const TransitionRecord> source, std::size_t batch_size,
                       std::size_t length, std::mt19937_64& rng);
PathBatch sample_paths(const ReplayBuffer& buffer, std::size_t batch_size, std::size_t length,
                       std::mt19937_64& rng);

enum class Phase { demo, env };

std::string_view phase_name(Phase phase);

struct PhaseSchedule {
  std::int64_t k = 0;  // kDemoForever for demo-only runs
};

// Demo phase iff t <= k. Throws InvalidArgument for t < 1 or k < 0.
Phase phase_for_step(const PhaseSchedule& schedule, std::int64_t t);

}  // namespace nac
