#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "binomix/kernels.hpp"
#include "binomix/simd.hpp"

using namespace binomix;

namespace {

std::vector<simd::Isa> vector_isas() {
  std::vector<simd::Isa> out;
  for (auto isa : {simd::Isa::avx2, simd::Isa::neon})
    if (simd::isa_available(isa)) out.push_back(isa);
  return out;
}

std::vector<double> uniform(std::mt19937_64& g, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(g);
  return v;
}

// Magnitude bound for Horner evaluation of the even polynomial at x: near a
// root the value itself is tiny while the rounding error scales with this.
double horner_scale(const std::vector<double>& x, std::size_t i, std::span<const double> c,
                    double u, double inv_h) {
  const double v = (x[i] - u) * inv_h;
  if (std::fabs(v) > 1.0) return 0.0;
  double s = 0.0, p = 1.0;
  for (double ck : c) {
    s += std::fabs(ck) * p;
    p *= v * v;
  }
  return s;
}

// Tolerance relative to the sum of absolute terms, which bounds reordering error.
void check_close(double a, double b, double scale) {
  CHECK(std::fabs(a - b) <= 1e-12 * (scale + 1e-300));
}

}  // namespace

TEST_CASE("scalar table is always available and default isa is usable") {
  CHECK(simd::isa_available(simd::Isa::scalar));
  CHECK(simd::isa_available(simd::active_isa()));
  CHECK(simd::parse_isa("scalar") == simd::Isa::scalar);
  CHECK_THROWS_AS(simd::parse_isa("sse9"), std::invalid_argument);
}

TEST_CASE("scoped override restores the previous variant") {
  const auto before = simd::active_isa();
  {
    simd::ScopedIsa guard(simd::Isa::scalar);
    CHECK(simd::active_isa() == simd::Isa::scalar);
  }
  CHECK(simd::active_isa() == before);
}

TEST_CASE("vector variants match the scalar reference") {
  const auto isas = vector_isas();
  if (isas.empty()) {
    MESSAGE("no vector variant on this machine; scalar only");
    return;
  }
  std::mt19937_64 g(11);
  const std::vector<KernelSpec> kernels{KernelSpec::epanechnikov(), KernelSpec::legendre(2),
                                        KernelSpec::legendre(4), KernelSpec::legendre(6),
                                        KernelSpec::legendre(8)};
  const auto& ref = simd::table(simd::Isa::scalar);
  for (auto isa : isas) {
    const auto& vec = simd::table(isa);
    CAPTURE(simd::isa_name(isa));
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 1000u, 1003u}) {
      CAPTURE(n);
      const auto x = uniform(g, n, 0.0, 1.0);
      const auto w = uniform(g, n, -2.0, 2.0);
      for (const auto& k : kernels) {
        const auto c = k.even_coefficients();
        for (double h : {0.05, 0.3, 2.0}) {
          const double u = 0.37;
          std::vector<double> a(n), b(n);
          if (n > 0) {
            ref.kernel_eval(x.data(), n, c.data(), c.size(), u, 1.0 / h, a.data());
            vec.kernel_eval(x.data(), n, c.data(), c.size(), u, 1.0 / h, b.data());
          }
          double scale = 0.0, wscale = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            const double hs = horner_scale(x, i, c, u, 1.0 / h);
            check_close(a[i], b[i], hs);
            scale += hs;
            wscale += hs * std::fabs(w[i]);
          }
          if (n == 0) continue;
          check_close(ref.kernel_sum(x.data(), nullptr, n, c.data(), c.size(), u, 1.0 / h),
                      vec.kernel_sum(x.data(), nullptr, n, c.data(), c.size(), u, 1.0 / h), scale);
          check_close(ref.kernel_sum(x.data(), w.data(), n, c.data(), c.size(), u, 1.0 / h),
                      vec.kernel_sum(x.data(), w.data(), n, c.data(), c.size(), u, 1.0 / h), wscale);
        }
      }
      if (n == 0) continue;
      double dscale = 0.0, sscale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        dscale += std::fabs(x[i] * w[i]);
        sscale += (w[i] - 0.1) * (w[i] - 0.1);
      }
      check_close(ref.dot(x.data(), w.data(), n), vec.dot(x.data(), w.data(), n), dscale);
      check_close(ref.sum_sq_dev(w.data(), n, 0.1), vec.sum_sq_dev(w.data(), n, 0.1), sscale);
    }
  }
}

TEST_CASE("support is closed at |v| = 1 in every variant") {
  // u = 0.5, h = 0.25: points 0.25 and 0.75 sit exactly on the support edge
  const std::vector<double> x{0.25, 0.75, 0.2499999, 0.7500001};
  const auto k = KernelSpec::legendre(4);
  const auto c = k.even_coefficients();
  std::vector<simd::Isa> all{simd::Isa::scalar};
  for (auto i : vector_isas()) all.push_back(i);
  for (auto isa : all) {
    std::vector<double> out(x.size());
    simd::table(isa).kernel_eval(x.data(), x.size(), c.data(), c.size(), 0.5, 4.0, out.data());
    CHECK(out[0] == doctest::Approx(k(-1.0)).epsilon(1e-14));
    CHECK(out[1] == doctest::Approx(k(1.0)).epsilon(1e-14));
    CHECK(out[0] != 0.0);
    CHECK(out[2] == 0.0);
    CHECK(out[3] == 0.0);
  }
}

TEST_CASE("span wrappers validate sizes") {
  const std::vector<double> x{0.1, 0.2}, w{1.0};
  const std::vector<double> c{0.75, -0.75};
  CHECK_THROWS_AS(simd::kernel_sum(x, w, c, 0.5, 1.0), std::invalid_argument);
  CHECK(simd::kernel_sum({}, {}, c, 0.5, 1.0) == 0.0);
  std::vector<double> out(1);
  CHECK_THROWS_AS(simd::kernel_eval(x, c, 0.5, 1.0, out), std::invalid_argument);
  CHECK_THROWS_AS(simd::dot(x, w), std::invalid_argument);
}
