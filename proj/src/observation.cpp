#include "nac/observation.hpp"

#include "nac/errors.hpp"

namespace nac {

std::size_t Observation::index() const {
  if (const auto* i = std::get_if<std::size_t>(&value_)) return *i;
  throw InvalidArgument("observation is a feature vector, not a state index");
}

std::span<const double> Observation::features() const {
  if (const auto* v = std::get_if<std::vector<double>>(&value_)) return *v;
  throw InvalidArgument("observation is a state index, not a feature vector");
}

std::size_t Observation::width() const noexcept {
  if (const auto* v = std::get_if<std::vector<double>>(&value_)) return v->size();
  return 1;
}

bool ObservationSpec::matches(const Observation& obs) const {
  if (kind == Kind::discrete) return obs.is_discrete() && obs.index() < size;
  return !obs.is_discrete() && obs.features().size() == size;
}

std::string ObservationSpec::describe() const {
  return (kind == Kind::discrete ? "discrete:" : "features:") + std::to_string(size);
}

}  // namespace nac
