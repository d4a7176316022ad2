#include "nac/q_model.hpp"

#include <cmath>

#include "nac/errors.hpp"
#include "nac/kernels.hpp"

namespace nac {

QRow q_forward(const QModel& model, const Observation& obs) { return model.forward(obs); }

ParamVector q_backward(const QModel& model, const Observation& obs,
                       std::span<const double> upstream) {
  if (upstream.size() != model.num_actions()) {
    throw InvalidArgument("upstream length " + std::to_string(upstream.size()) +
                          " does not match action count " + std::to_string(model.num_actions()));
  }
  ForwardCache cache;
  model.forward(obs, &cache);
  ParamVector grad(model.num_params(), 0.0);
  model.backward(cache, upstream, grad);
  return grad;
}

double l2_norm(std::span<const double> v) { return std::sqrt(kernels::dot(v, v)); }

UpdateReport apply_update(QModel& model, std::span<const double> grad, double lr, double clip_norm,
                          ClipMode mode) {
  auto params = model.params();
  if (grad.size() != params.size()) {
    throw InvalidArgument("gradient length does not match the model parameter count");
  }
  if (!(lr > 0.0) || !(clip_norm > 0.0)) {
    throw InvalidArgument("learning rate and clip threshold must be positive");
  }
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!std::isfinite(grad[i])) {
      throw NumericError("non-finite gradient entry at index " + std::to_string(i) +
                         "; update skipped");
    }
  }
  UpdateReport report;
  report.grad_norm = l2_norm(grad);
  report.applied_norm = report.grad_norm;
  if (mode == ClipMode::global_norm) {
    double scale = 1.0;
    if (report.grad_norm > clip_norm) {
      scale = clip_norm / report.grad_norm;
      report.clipped = true;
      report.applied_norm = clip_norm;
    }
    kernels::axpy(-lr * scale, grad, params);
  } else {
    double sq = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i) {
      double g = grad[i];
      if (g > clip_norm) {
        g = clip_norm;
        report.clipped = true;
      } else if (g < -clip_norm) {
        g = -clip_norm;
        report.clipped = true;
      }
      sq += g * g;
      params[i] -= lr * g;
    }
    report.applied_norm = std::sqrt(sq);
  }
  return report;
}

TargetSnapshot sync_target(const QModel& model, std::int64_t step) {
  return TargetSnapshot(std::shared_ptr<const QModel>(model.clone()), step);
}

ParamVector finite_diff_gradient(QModel& model, const std::function<double(const QModel&)>& loss,
                                 double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  auto params = model.params();
  ParamVector grad(params.size(), 0.0);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + eps;
    const double up = loss(model);
    params[i] = saved - eps;
    const double down = loss(model);
    params[i] = saved;
    grad[i] = (up - down) / (2.0 * eps);
  }
  return grad;
}

}  // namespace nac
