#include "nac/mlp_q.hpp"

#include <cmath>
#include <random>

#include "nac/errors.hpp"
#include "nac/kernels.hpp"

namespace nac {

MlpQ::MlpQ(MlpShape shape) : shape_(std::move(shape)) { build_layout(); }

MlpQ::MlpQ(MlpShape shape, std::uint64_t seed) : MlpQ(std::move(shape)) {
  std::mt19937_64 rng(seed);
  for (const Layer& layer : layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (std::size_t i = 0; i < layer.in * layer.out; ++i) {
      params_[layer.weight_offset + i] = dist(rng);
    }
  }
}

void MlpQ::build_layout() {
  if (shape_.input == 0 || shape_.output == 0) {
    throw InvalidArgument("perceptron input and output widths must be positive");
  }
  spec_ = ObservationSpec{ObservationSpec::Kind::features, shape_.input};
  std::size_t in = shape_.input;
  std::size_t offset = 0;
  auto add_layer = [&](std::size_t out) {
    if (out == 0) throw InvalidArgument("perceptron layer widths must be positive");
    Layer layer{in, out, offset, offset + in * out};
    offset = layer.bias_offset + out;
    layers_.push_back(layer);
    in = out;
  };
  for (std::size_t h : shape_.hidden) add_layer(h);
  add_layer(shape_.output);
  params_.assign(offset, 0.0);
}

std::span<const double> MlpQ::output_bias() const {
  const Layer& last = layers_.back();
  return std::span<const double>(params_).subspan(last.bias_offset, last.out);
}

QRow MlpQ::forward(const Observation& obs, ForwardCache* cache) const {
  if (!spec_.matches(obs)) {
    throw InvalidArgument("observation does not match perceptron input " + spec_.describe());
  }
  const auto& k = kernels::active();
  const double* p = params_.data();
  std::vector<double> x(obs.features().begin(), obs.features().end());
  if (cache != nullptr) {
    cache->activations.clear();
    cache->activations.reserve(layers_.size() + 1);
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    std::vector<double> z(layer.out);
    k.gemv(p + layer.weight_offset, p + layer.bias_offset, x.data(), z.data(), layer.out, layer.in);
    if (cache != nullptr) cache->activations.push_back(std::move(x));
    if (l + 1 < layers_.size()) {
      if (shape_.activation == Activation::relu) {
        for (double& v : z) v = v > 0.0 ? v : 0.0;
      } else {
        for (double& v : z) v = std::tanh(v);
      }
    }
    x = std::move(z);
  }
  if (cache != nullptr) cache->activations.push_back(x);
  return QRow{std::move(x)};
}

// cache->activations[l] is the input to layer l (post-activation of l - 1);
// the final entry is the output row.
void MlpQ::backward(const ForwardCache& cache, std::span<const double> upstream,
                    std::span<double> grad) const {
  if (upstream.size() != shape_.output || grad.size() != params_.size() ||
      cache.activations.size() != layers_.size() + 1) {
    throw InvalidArgument("perceptron backward: shape mismatch");
  }
  const auto& k = kernels::active();
  const double* p = params_.data();
  std::vector<double> delta(upstream.begin(), upstream.end());
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Layer& layer = layers_[l];
    const std::vector<double>& input = cache.activations[l];
    k.outer_acc(delta.data(), input.data(), grad.data() + layer.weight_offset, layer.out, layer.in);
    double* gb = grad.data() + layer.bias_offset;
    for (std::size_t o = 0; o < layer.out; ++o) gb[o] += delta[o];
    if (l == 0) break;
    std::vector<double> prev(layer.in, 0.0);
    k.gemv_t_acc(p + layer.weight_offset, delta.data(), prev.data(), layer.out, layer.in);
    // input is the activation output of layer l - 1.
    if (shape_.activation == Activation::relu) {
      for (std::size_t i = 0; i < prev.size(); ++i) {
        if (!(input[i] > 0.0)) prev[i] = 0.0;
      }
    } else {
      for (std::size_t i = 0; i < prev.size(); ++i) prev[i] *= 1.0 - input[i] * input[i];
    }
    delta = std::move(prev);
  }
}

std::string MlpQ::descriptor() const {
  std::string widths = std::to_string(shape_.input);
  for (std::size_t h : shape_.hidden) widths += "," + std::to_string(h);
  widths += "," + std::to_string(shape_.output);
  return std::string("mlp widths=") + widths +
         " activation=" + (shape_.activation == Activation::relu ? "relu" : "tanh") +
         " frame_stack=" + std::to_string(shape_.frame_stack);
}

}  // namespace nac
