#include "nac/replay.hpp"

#include "nac/errors.hpp"

namespace nac {

namespace {

std::pair<bool, std::size_t> shape_of(const TransitionRecord& r) {
  return {r.obs.is_discrete(), r.obs.width()};
}

// True if record j continues record i within one episode.
bool chained(const TransitionRecord& a, const TransitionRecord& b) {
  return a.episode == b.episode && b.t == a.t + 1 && !a.done;
}

template <typename At>
PathBatch sample_paths_impl(std::size_t n, At at, std::size_t batch_size, std::size_t length,
                            std::mt19937_64& rng) {
  if (n == 0) throw StateError("cannot sample paths from an empty source");
  if (length == 0) throw InvalidArgument("path length must be at least 1");
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  PathBatch out;
  out.paths.reserve(batch_size);
  // Bounded redraws: sources made only of truncated fragments have no
  // valid path and are reported instead of looping forever.
  constexpr int kMaxRedraws = 1000;
  while (out.paths.size() < batch_size) {
    std::vector<TransitionRecord> path;
    bool valid = false;
    for (int attempt = 0; attempt < kMaxRedraws && !valid; ++attempt) {
      path.clear();
      std::size_t i = pick(rng);
      path.push_back(at(i));
      while (path.size() < length && !path.back().done && i + 1 < n && chained(at(i), at(i + 1))) {
        ++i;
        path.push_back(at(i));
      }
      valid = path.size() == length || path.back().done;
    }
    if (!valid) throw StateError("source holds no complete path of the requested length");
    out.paths.push_back(std::move(path));
  }
  return out;
}

}  // namespace

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidArgument("replay capacity must be at least 1");
}

void ReplayBuffer::push(TransitionRecord record) {
  const auto shape = shape_of(record);
  if (shape_ && *shape_ != shape) {
    throw InvalidArgument("replay record shape differs from the buffer's first record");
  }
  if (!shape_) shape_ = shape;
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(record));
  } else {
    storage_[head_] = std::move(record);
    head_ = (head_ + 1) % capacity_;
  }
  ++inserted_;
}

const TransitionRecord& ReplayBuffer::operator[](std::size_t i) const {
  if (i >= storage_.size()) throw InvalidArgument("replay index out of range");
  return storage_[(head_ + i) % storage_.size()];
}

Batch sample_batch(std::span<const TransitionRecord> source, Source tag, std::size_t batch_size,
                   std::mt19937_64& rng) {
  if (source.empty()) throw StateError("cannot sample from an empty source");
  std::uniform_int_distribution<std::size_t> pick(0, source.size() - 1);
  Batch b;
  b.records.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) b.records.push_back(source[pick(rng)]);
  b.sources.assign(batch_size, tag);
  return b;
}

Batch sample_batch(const ReplayBuffer& buffer, std::size_t batch_size, std::mt19937_64& rng) {
  if (buffer.empty()) throw StateError("cannot sample from an empty replay buffer");
  std::uniform_int_distribution<std::size_t> pick(0, buffer.size() - 1);
  Batch b;
  b.records.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) b.records.push_back(buffer[pick(rng)]);
  b.sources.assign(batch_size, Source::env);
  return b;
}

Batch sample_mixed(std::span<const TransitionRecord> demos, const ReplayBuffer& buffer,
                   std::size_t batch_size, double demo_fraction, std::mt19937_64& rng) {
  if (buffer.empty()) return sample_batch(demos, Source::demo, batch_size, rng);
  if (demos.empty()) return sample_batch(buffer, batch_size, rng);
  const auto n_demo = static_cast<std::size_t>(demo_fraction * static_cast<double>(batch_size) + 0.5);
  Batch b = sample_batch(demos, Source::demo, std::min(n_demo, batch_size), rng);
  Batch e = sample_batch(buffer, batch_size - b.size(), rng);
  for (std::size_t i = 0; i < e.size(); ++i) {
    b.records.push_back(std::move(e.records[i]));
    b.sources.push_back(Source::env);
  }
  return b;
}

PathBatch sample_paths(std::span<const TransitionRecord> source, std::size_t batch_size,
                       std::size_t length, std::mt19937_64& rng) {
  return sample_paths_impl(
      source.size(), [&](std::size_t i) -> const TransitionRecord& { return source[i]; },
      batch_size, length, rng);
}

PathBatch sample_paths(const ReplayBuffer& buffer, std::size_t batch_size, std::size_t length,
                       std::mt19937_64& rng) {
  return sample_paths_impl(
      buffer.size(), [&](std::size_t i) -> const TransitionRecord& { return buffer[i]; },
      batch_size, length, rng);
}

std::string_view phase_name(Phase phase) { return phase == Phase::demo ? "demo" : "env"; }

Phase phase_for_step(const PhaseSchedule& schedule, std::int64_t t) {
  if (t < 1) throw InvalidArgument("phase_for_step: step must be >= 1");
  if (schedule.k < 0) throw InvalidArgument("phase_for_step: k must be >= 0");
  return t <= schedule.k ? Phase::demo : Phase::env;
}

}  // namespace nac
