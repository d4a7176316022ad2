#pragma once

// Dense vector kernels used by the perceptron forward/backward passes and the
// optimizer. Each kernel has a portable scalar reference and, on x86-64, an
// AVX2+FMA variant. The active table is chosen once at startup from CPUID and
// can be overridden (tests, NAC_KERNELS=scalar) to pin bit-level behavior.

#include <cstddef>
#include <span>
#include <string_view>

namespace nac::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y[o] = bias[o] + sum_i w[o * in + i] * x[i]   (w row-major, out x in)
  void (*gemv)(const double* w, const double* bias, const double* x, double* y,
               std::size_t out, std::size_t in);
  // gx[i] += sum_o w[o * in + i] * g[o]
  void (*gemv_t_acc)(const double* w, const double* g, double* gx, std::size_t out,
                     std::size_t in);
  // gw[o * in + i] += g[o] * x[i]
  void (*outer_acc)(const double* g, const double* x, double* gw, std::size_t out,
                    std::size_t in);
};

const KernelTable& scalar_table();
// Null when the build or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

// Currently selected table.
const KernelTable& active();
// Forces a specific ISA; returns false (and leaves the selection unchanged)
// if that ISA is unavailable on this machine.
bool select(Isa isa);
std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace nac::kernels
