// Scalar reference kernels. These define the semantics the vector variants
// must reproduce.

#include <cmath>

#include "binomix/simd.hpp"

namespace binomix::simd::detail {
namespace {

double kernel_sum_scalar(const double* x, const double* w, std::size_t n,
                         const double* c, std::size_t nc, double u, double inv_h) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = (x[i] - u) * inv_h;
    if (std::fabs(v) <= 1.0) {
      const double k = horner_even(c, nc, v * v);
      acc += w ? w[i] * k : k;
    }
  }
  return acc;
}

void kernel_eval_scalar(const double* x, std::size_t n, const double* c, std::size_t nc,
                        double u, double inv_h, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = (x[i] - u) * inv_h;
    out[i] = std::fabs(v) <= 1.0 ? horner_even(c, nc, v * v) : 0.0;
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_sq_dev_scalar(const double* a, std::size_t n, double center) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - center;
    acc += d * d;
  }
  return acc;
}

}  // namespace

const KernelTable scalar_table{kernel_sum_scalar, kernel_eval_scalar, dot_scalar,
                               sum_sq_dev_scalar};

}  // namespace binomix::simd::detail
