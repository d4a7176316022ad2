#pragma once

#include "nac/q_model.hpp"

namespace nac {

// Full |S| x |A| table, zero-initialized so the initial soft policy is uniform.
class TabularQ final : public QModel {
 public:
  TabularQ(std::size_t num_states, std::size_t num_actions);

  ModelKind kind() const noexcept override { return ModelKind::tabular; }
  std::size_t num_actions() const noexcept override { return num_actions_; }
  std::size_t num_states() const noexcept { return spec_.size; }
  std::size_t num_params() const noexcept override { return table_.size(); }
  const ObservationSpec& input_spec() const noexcept override { return spec_; }

  std::span<double> params() noexcept override { return table_; }
  std::span<const double> params() const noexcept override { return table_; }

  double& at(std::size_t state, std::size_t action) { return table_[state * num_actions_ + action]; }
  double at(std::size_t state, std::size_t action) const {
    return table_[state * num_actions_ + action];
  }

  QRow forward(const Observation& obs, ForwardCache* cache = nullptr) const override;
  void backward(const ForwardCache& cache, std::span<const double> upstream,
                std::span<double> grad) const override;
  std::unique_ptr<QModel> clone() const override { return std::make_unique<TabularQ>(*this); }
  std::string descriptor() const override;

 private:
  ObservationSpec spec_;
  std::size_t num_actions_;
  std::vector<double> table_;
};

}  // namespace nac
