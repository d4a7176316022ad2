#include "nac/tabular_q.hpp"

#include "nac/errors.hpp"

namespace nac {

TabularQ::TabularQ(std::size_t num_states, std::size_t num_actions)
    : spec_{ObservationSpec::Kind::discrete, num_states},
      num_actions_(num_actions),
      table_(num_states * num_actions, 0.0) {
  if (num_states == 0 || num_actions == 0) {
    throw InvalidArgument("tabular Q needs at least one state and one action");
  }
}

QRow TabularQ::forward(const Observation& obs, ForwardCache* cache) const {
  if (!spec_.matches(obs)) {
    throw InvalidArgument("observation does not match tabular input " + spec_.describe());
  }
  const std::size_t s = obs.index();
  if (cache != nullptr) cache->state = s;
  const auto first = table_.begin() + static_cast<std::ptrdiff_t>(s * num_actions_);
  return QRow{std::vector<double>(first, first + static_cast<std::ptrdiff_t>(num_actions_))};
}

void TabularQ::backward(const ForwardCache& cache, std::span<const double> upstream,
                        std::span<double> grad) const {
  if (upstream.size() != num_actions_ || grad.size() != table_.size()) {
    throw InvalidArgument("tabular backward: shape mismatch");
  }
  double* row = grad.data() + cache.state * num_actions_;
  for (std::size_t a = 0; a < num_actions_; ++a) row[a] += upstream[a];
}

std::string TabularQ::descriptor() const {
  return "tabular states=" + std::to_string(spec_.size) +
         " actions=" + std::to_string(num_actions_);
}

}  // namespace nac
