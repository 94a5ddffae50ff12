// NEON (aarch64, float64x2) variants. Built only on arm64 targets.

#include <arm_neon.h>

#include <cmath>

#include "binomix/simd.hpp"

namespace binomix::simd::detail {
namespace {

inline float64x2_t horner_even_f64(const double* c, std::size_t nc, float64x2_t z) {
  float64x2_t p = vdupq_n_f64(c[nc - 1]);
  for (std::size_t k = nc - 1; k-- > 0;) p = vfmaq_f64(vdupq_n_f64(c[k]), p, z);
  return p;
}

inline float64x2_t kernel2(float64x2_t x, float64x2_t u, float64x2_t inv_h, const double* c,
                           std::size_t nc) {
  const float64x2_t v = vmulq_f64(vsubq_f64(x, u), inv_h);
  const uint64x2_t inside = vcleq_f64(vabsq_f64(v), vdupq_n_f64(1.0));
  const float64x2_t k = horner_even_f64(c, nc, vmulq_f64(v, v));
  return vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(k), inside));
}

double kernel_sum_neon(const double* x, const double* w, std::size_t n, const double* c,
                       std::size_t nc, double u, double inv_h) {
  const float64x2_t vu = vdupq_n_f64(u);
  const float64x2_t vih = vdupq_n_f64(inv_h);
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t k0 = kernel2(vld1q_f64(x + i), vu, vih, c, nc);
    const float64x2_t k1 = kernel2(vld1q_f64(x + i + 2), vu, vih, c, nc);
    if (w) {
      acc0 = vfmaq_f64(acc0, k0, vld1q_f64(w + i));
      acc1 = vfmaq_f64(acc1, k1, vld1q_f64(w + i + 2));
    } else {
      acc0 = vaddq_f64(acc0, k0);
      acc1 = vaddq_f64(acc1, k1);
    }
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) {
    const double v = (x[i] - u) * inv_h;
    if (std::fabs(v) <= 1.0) {
      const double k = horner_even(c, nc, v * v);
      acc += w ? w[i] * k : k;
    }
  }
  return acc;
}

void kernel_eval_neon(const double* x, std::size_t n, const double* c, std::size_t nc,
                      double u, double inv_h, double* out) {
  const float64x2_t vu = vdupq_n_f64(u);
  const float64x2_t vih = vdupq_n_f64(inv_h);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, kernel2(vld1q_f64(x + i), vu, vih, c, nc));
  for (; i < n; ++i) {
    const double v = (x[i] - u) * inv_h;
    out[i] = std::fabs(v) <= 1.0 ? horner_even(c, nc, v * v) : 0.0;
  }
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_sq_dev_neon(const double* a, std::size_t n, double center) {
  const float64x2_t vc = vdupq_n_f64(center);
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vc);
    const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vc);
    acc0 = vfmaq_f64(acc0, d0, d0);
    acc1 = vfmaq_f64(acc1, d1, d1);
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - center;
    acc += d * d;
  }
  return acc;
}

}  // namespace

const KernelTable neon_table{kernel_sum_neon, kernel_eval_neon, dot_neon, sum_sq_dev_neon};

}  // namespace binomix::simd::detail
