#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nac/observation.hpp"
#include "nac/soft_math.hpp"

namespace nac {

// Flat view over every trainable parameter of a model, in checkpoint order.
using ParamVector = std::vector<double>;

enum class ModelKind { tabular, mlp };

// Intermediate values from a forward pass that backward() needs. Owned by the
// caller so const models can be evaluated from several threads.
struct ForwardCache {
  std::size_t state = 0;
  std::vector<std::vector<double>> activations;  // per layer input, then pre-activations
};

// A Q-function approximator: Q(obs, .) plus exact parameter gradients.
class QModel {
 public:
  virtual ~QModel() = default;

  virtual ModelKind kind() const noexcept = 0;
  virtual std::size_t num_actions() const noexcept = 0;
  virtual std::size_t num_params() const noexcept = 0;
  virtual const ObservationSpec& input_spec() const noexcept = 0;

  virtual std::span<double> params() noexcept = 0;
  virtual std::span<const double> params() const noexcept = 0;

  // Throws InvalidArgument when obs does not match input_spec().
  virtual QRow forward(const Observation& obs, ForwardCache* cache = nullptr) const = 0;

  // grad += d/dtheta sum_a upstream[a] * Q(obs, a), using the cache from a
  // forward pass on the same observation with the current parameters.
  virtual void backward(const ForwardCache& cache, std::span<const double> upstream,
                        std::span<double> grad) const = 0;

  virtual std::unique_ptr<QModel> clone() const = 0;

  // Single-line architecture descriptor used in checkpoint headers.
  virtual std::string descriptor() const = 0;
};

QRow q_forward(const QModel& model, const Observation& obs);

// Exact gradient of sum_a upstream[a] * Q(obs, a).
ParamVector q_backward(const QModel& model, const Observation& obs,
                       std::span<const double> upstream);

enum class ClipMode { global_norm, per_element };

struct UpdateReport {
  double grad_norm = 0.0;     // before clipping
  double applied_norm = 0.0;  // after clipping
  bool clipped = false;
};

/// Clips grad (global L2 norm, or per element) to clip_norm and takes one
/// descent step params -= lr * grad. Throws NumericError, leaving the model
/// untouched, when grad contains a non-finite entry.
UpdateReport apply_update(QModel& model, std::span<const double> grad, double lr, double clip_norm,
                          ClipMode mode = ClipMode::global_norm);

// Frozen copy of a model's parameters, used for bootstrap targets.
class TargetSnapshot {
 public:
  TargetSnapshot(std::shared_ptr<const QModel> model, std::int64_t step)
      : model_(std::move(model)), step_(step) {}

  const QModel& model() const noexcept { return *model_; }
  std::int64_t step() const noexcept { return step_; }
  QRow forward(const Observation& obs) const { return model_->forward(obs); }

 private:
  std::shared_ptr<const QModel> model_;
  std::int64_t step_;
};

TargetSnapshot sync_target(const QModel& model, std::int64_t step = 0);

/// Central-difference gradient of loss at the model's current parameters.
/// Every coordinate is restored bit-for-bit afterward.
ParamVector finite_diff_gradient(QModel& model, const std::function<double(const QModel&)>& loss,
                                 double eps = 1e-5);

double l2_norm(std::span<const double> v);

}  // namespace nac
