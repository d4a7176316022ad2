#include "nac/kernels.hpp"

namespace nac::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_scalar(const double* w, const double* bias, const double* x, double* y,
                 std::size_t out, std::size_t in) {
  for (std::size_t o = 0; o < out; ++o) y[o] = bias[o] + dot_scalar(w + o * in, x, in);
}

void gemv_t_acc_scalar(const double* w, const double* g, double* gx, std::size_t out,
                       std::size_t in) {
  for (std::size_t o = 0; o < out; ++o) {
    if (g[o] != 0.0) axpy_scalar(g[o], w + o * in, gx, in);
  }
}

void outer_acc_scalar(const double* g, const double* x, double* gw, std::size_t out,
                      std::size_t in) {
  for (std::size_t o = 0; o < out; ++o) {
    if (g[o] != 0.0) axpy_scalar(g[o], x, gw + o * in, in);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::scalar, dot_scalar, axpy_scalar, gemv_scalar,
                                 gemv_t_acc_scalar, outer_acc_scalar};
  return table;
}

}  // namespace nac::kernels
