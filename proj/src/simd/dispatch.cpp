#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "binomix/simd.hpp"

namespace binomix::simd {
namespace {

Isa probe_cpu() {
#if defined(BINOMIX_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
#if defined(BINOMIX_HAVE_NEON)
  return Isa::neon;
#endif
  return Isa::scalar;
}

Isa initial_isa() {
  const Isa detected = probe_cpu();
  if (const char* env = std::getenv("BINOMIX_SIMD")) {
    const Isa wanted = parse_isa(env);
    if (isa_available(wanted)) return wanted;
  }
  return detected;
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(BINOMIX_HAVE_AVX2)
      return detected_isa() == Isa::avx2;
#else
      return false;
#endif
    case Isa::neon:
#if defined(BINOMIX_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  switch (isa) {
#if defined(BINOMIX_HAVE_AVX2)
    case Isa::avx2:
      if (detected_isa() == Isa::avx2) return detail::avx2_table;
      break;
#endif
#if defined(BINOMIX_HAVE_NEON)
    case Isa::neon:
      return detail::neon_table;
#endif
    case Isa::scalar:
      return detail::scalar_table;
    default:
      break;
  }
  throw std::invalid_argument("SIMD variant not available: " + std::string(isa_name(isa)));
}

Isa detected_isa() {
  static const Isa isa = probe_cpu();
  return isa;
}

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument("SIMD variant not available: " + std::string(isa_name(isa)));
  active_slot().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "neon") return Isa::neon;
  throw std::invalid_argument("unknown SIMD variant: " + std::string(name));
}

double kernel_sum(std::span<const double> x, std::span<const double> weights,
                  std::span<const double> even_coeffs, double u, double inv_h) {
  if (!weights.empty() && weights.size() != x.size())
    throw std::invalid_argument("kernel_sum: weights/points size mismatch");
  if (x.empty()) return 0.0;
  return table(active_isa())
      .kernel_sum(x.data(), weights.empty() ? nullptr : weights.data(), x.size(),
                  even_coeffs.data(), even_coeffs.size(), u, inv_h);
}

void kernel_eval(std::span<const double> x, std::span<const double> even_coeffs, double u,
                 double inv_h, std::span<double> out) {
  if (out.size() != x.size()) throw std::invalid_argument("kernel_eval: output size mismatch");
  if (x.empty()) return;
  table(active_isa())
      .kernel_eval(x.data(), x.size(), even_coeffs.data(), even_coeffs.size(), u, inv_h,
                   out.data());
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  if (a.empty()) return 0.0;
  return table(active_isa()).dot(a.data(), b.data(), a.size());
}

double sum_sq_dev(std::span<const double> a, double center) {
  if (a.empty()) return 0.0;
  return table(active_isa()).sum_sq_dev(a.data(), a.size(), center);
}

}  // namespace binomix::simd
