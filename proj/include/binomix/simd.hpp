#pragma once

// Data-parallel inner loops shared by every estimator.
//
// Every kernel the library builds is an even polynomial on [-1, 1] and zero
// outside, so the hot loops only need the coefficients of K in powers of v^2:
//
//     K(v) = c[0] + c[1] v^2 + c[2] v^4 + ...,   |v| <= 1
//
// Each routine exists as a scalar reference and as ISA-specific variants
// (AVX2+FMA on x86-64, NEON on aarch64). The variant is picked once at
// startup from the CPU and can be overridden with BINOMIX_SIMD=scalar|avx2|neon
// or set_active_isa(). Variants agree with the reference up to summation
// order; tests/test_simd.cpp pins the tolerance.

#include <cstddef>
#include <span>
#include <string_view>

namespace binomix::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  // sum_i w[i] * K((x[i] - u) * inv_h); w == nullptr means unit weights.
  double (*kernel_sum)(const double* x, const double* w, std::size_t n,
                       const double* even_coeffs, std::size_t n_coeffs,
                       double u, double inv_h);
  // out[i] = K((x[i] - u) * inv_h)
  void (*kernel_eval)(const double* x, std::size_t n, const double* even_coeffs,
                      std::size_t n_coeffs, double u, double inv_h, double* out);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i] - center)^2
  double (*sum_sq_dev)(const double* a, std::size_t n, double center);
};

const KernelTable& table(Isa isa);
bool isa_available(Isa isa);
Isa detected_isa();
Isa active_isa();
void set_active_isa(Isa isa);
std::string_view isa_name(Isa isa);
Isa parse_isa(std::string_view name);

// RAII override of the active ISA, restoring the previous one on exit.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
  ~ScopedIsa() { set_active_isa(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

double kernel_sum(std::span<const double> x, std::span<const double> weights,
                  std::span<const double> even_coeffs, double u, double inv_h);
void kernel_eval(std::span<const double> x, std::span<const double> even_coeffs,
                 double u, double inv_h, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
double sum_sq_dev(std::span<const double> a, double center);

namespace detail {
extern const KernelTable scalar_table;
#if defined(BINOMIX_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(BINOMIX_HAVE_NEON)
extern const KernelTable neon_table;
#endif

inline double horner_even(const double* c, std::size_t n, double z) {
  double p = c[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) p = p * z + c[k];
  return p;
}
}  // namespace detail

}  // namespace binomix::simd
