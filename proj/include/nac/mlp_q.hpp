#pragma once

#include <cstdint>

#include "nac/q_model.hpp"

namespace nac {

enum class Activation { relu, tanh };

struct MlpShape {
  std::size_t input = 0;
  std::vector<std::size_t> hidden{64, 64};
  std::size_t output = 0;
  Activation activation = Activation::relu;
  std::size_t frame_stack = 1;  // recorded in checkpoints; input already includes it
};

// Multilayer perceptron over a real feature vector. Parameters are laid out per
// layer as the row-major (out x in) weight matrix followed by the bias vector.
class MlpQ final : public QModel {
 public:
  // Weights U(-1/sqrt(fan_in), 1/sqrt(fan_in)) from a generator seeded with
  // `seed`; biases zero.
  MlpQ(MlpShape shape, std::uint64_t seed);
  // All-zero parameters.
  explicit MlpQ(MlpShape shape);

  ModelKind kind() const noexcept override { return ModelKind::mlp; }
  std::size_t num_actions() const noexcept override { return shape_.output; }
  std::size_t num_params() const noexcept override { return params_.size(); }
  const ObservationSpec& input_spec() const noexcept override { return spec_; }
  const MlpShape& shape() const noexcept { return shape_; }

  std::span<double> params() noexcept override { return params_; }
  std::span<const double> params() const noexcept override { return params_; }

  // Bias of the last layer (length = action count).
  std::span<const double> output_bias() const;

  QRow forward(const Observation& obs, ForwardCache* cache = nullptr) const override;
  void backward(const ForwardCache& cache, std::span<const double> upstream,
                std::span<double> grad) const override;
  std::unique_ptr<QModel> clone() const override { return std::make_unique<MlpQ>(*this); }
  std::string descriptor() const override;

 private:
  struct Layer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::size_t weight_offset = 0;
    std::size_t bias_offset = 0;
  };

  void build_layout();

  MlpShape shape_;
  ObservationSpec spec_;
  std::vector<Layer> layers_;
  std::vector<double> params_;
};

}  // namespace nac
