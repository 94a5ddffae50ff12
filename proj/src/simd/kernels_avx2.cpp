// AVX2 + FMA variants. Compiled with -mavx2 -mfma; only reached through the
// dispatch table after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "binomix/simd.hpp"

namespace binomix::simd::detail {
namespace {

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

inline __m256d horner_even_pd(const double* c, std::size_t nc, __m256d z) {
  __m256d p = _mm256_set1_pd(c[nc - 1]);
  for (std::size_t k = nc - 1; k-- > 0;) p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c[k]));
  return p;
}

// K at four points; lanes outside the support are zeroed.
inline __m256d kernel4(__m256d x, __m256d u, __m256d inv_h, const double* c,
                       std::size_t nc) {
  const __m256d v = _mm256_mul_pd(_mm256_sub_pd(x, u), inv_h);
  const __m256d inside = _mm256_cmp_pd(abs_pd(v), _mm256_set1_pd(1.0), _CMP_LE_OQ);
  const __m256d k = horner_even_pd(c, nc, _mm256_mul_pd(v, v));
  return _mm256_and_pd(k, inside);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double kernel_sum_avx2(const double* x, const double* w, std::size_t n, const double* c,
                       std::size_t nc, double u, double inv_h) {
  const __m256d vu = _mm256_set1_pd(u);
  const __m256d vih = _mm256_set1_pd(inv_h);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  if (w) {
    for (; i + 8 <= n; i += 8) {
      const __m256d k0 = kernel4(_mm256_loadu_pd(x + i), vu, vih, c, nc);
      const __m256d k1 = kernel4(_mm256_loadu_pd(x + i + 4), vu, vih, c, nc);
      acc0 = _mm256_fmadd_pd(k0, _mm256_loadu_pd(w + i), acc0);
      acc1 = _mm256_fmadd_pd(k1, _mm256_loadu_pd(w + i + 4), acc1);
    }
  } else {
    for (; i + 8 <= n; i += 8) {
      acc0 = _mm256_add_pd(acc0, kernel4(_mm256_loadu_pd(x + i), vu, vih, c, nc));
      acc1 = _mm256_add_pd(acc1, kernel4(_mm256_loadu_pd(x + i + 4), vu, vih, c, nc));
    }
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double v = (x[i] - u) * inv_h;
    if (std::fabs(v) <= 1.0) {
      const double k = horner_even(c, nc, v * v);
      acc += w ? w[i] * k : k;
    }
  }
  return acc;
}

void kernel_eval_avx2(const double* x, std::size_t n, const double* c, std::size_t nc,
                      double u, double inv_h, double* out) {
  const __m256d vu = _mm256_set1_pd(u);
  const __m256d vih = _mm256_set1_pd(inv_h);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, kernel4(_mm256_loadu_pd(x + i), vu, vih, c, nc));
  for (; i < n; ++i) {
    const double v = (x[i] - u) * inv_h;
    out[i] = std::fabs(v) <= 1.0 ? horner_even(c, nc, v * v) : 0.0;
  }
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_sq_dev_avx2(const double* a, std::size_t n, double center) {
  const __m256d vc = _mm256_set1_pd(center);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), vc);
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), vc);
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - center;
    acc += d * d;
  }
  return acc;
}

}  // namespace

const KernelTable avx2_table{kernel_sum_avx2, kernel_eval_avx2, dot_avx2, sum_sq_dev_avx2};

}  // namespace binomix::simd::detail
