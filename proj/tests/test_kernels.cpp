#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "binomix/kernels.hpp"
#include "binomix/quadrature.hpp"

using namespace binomix;

namespace {

// Independent evaluation: sum over m of phi_m(0) phi_m(u) with Legendre values
// from the three-term recurrence, no monomial expansion.
double legendre_projection(int order, double u) {
  auto p = [](int m, double x) {
    double p0 = 1.0, p1 = x;
    if (m == 0) return p0;
    for (int k = 1; k < m; ++k) {
      const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
      p0 = p1;
      p1 = p2;
    }
    return p1;
  };
  double s = 0.0;
  for (int m = 0; m <= order; ++m) s += (2.0 * m + 1.0) / 2.0 * p(m, 0.0) * p(m, u);
  return s;
}

// Moment by a Gauss-Legendre rule with more nodes than the kernel's own routine.
double oracle_moment(const KernelSpec& k, int j) {
  return quad::integrate_fixed([&](double u) { return std::pow(u, j) * k(u); }, -1.0, 1.0,
                               k.degree() + j + 4);
}

}  // namespace

TEST_CASE("epanechnikov values and moments") {
  const auto k = KernelSpec::epanechnikov();
  CHECK(k(0.0) == 0.75);
  CHECK(eval_kernel(k, 2.0) == 0.0);
  CHECK(k(1.0) == 0.0);
  CHECK(std::fabs(kernel_moment(k, 0) - 1.0) <= 1e-10);
  CHECK(std::fabs(kernel_moment(k, 1)) <= 1e-10);
  CHECK(std::fabs(kernel_moment(k, 2) - 0.2) <= 1e-10);
  CHECK(k.name() == "epanechnikov");
}

TEST_CASE("legendre order 2 is the quadratic 9/8 - 15/8 u^2") {
  const auto k = KernelSpec::legendre(2);
  for (double u : {-1.0, -0.4, 0.0, 0.3, 1.0}) CHECK(k(u) == doctest::Approx(1.125 - 1.875 * u * u));
  CHECK(std::fabs(oracle_moment(k, 0) - 1.0) <= 1e-8);
  CHECK(std::fabs(kernel_moment(k, 1)) <= 1e-8);
}

TEST_CASE("legendre kernels: moment conditions against an independent rule") {
  for (int order : {2, 4, 6, 8}) {
    CAPTURE(order);
    const auto k = KernelSpec::legendre(order);
    CHECK(std::fabs(oracle_moment(k, 0) - 1.0) <= 1e-8);
    CHECK(std::fabs(kernel_moment(k, 0) - 1.0) <= 1e-8);
    for (int j = 1; j <= order - 1; ++j) {
      CAPTURE(j);
      CHECK(std::fabs(oracle_moment(k, j)) <= 1e-8);
      CHECK(std::fabs(kernel_moment(k, j)) <= 1e-8);
    }
    // odd moments vanish beyond the order too; the next even one does not
    CHECK(std::fabs(kernel_moment(k, order + 1)) <= 1e-8);
    CHECK(std::fabs(kernel_moment(k, order + 2)) > 1e-4);
  }
}

TEST_CASE("legendre evaluation matches the projection sum") {
  for (int order : {2, 4, 6, 8}) {
    const auto k = KernelSpec::legendre(order);
    for (double u : {-0.9, -0.5, 0.0, 0.25, 0.5, 0.77, 1.0})
      CHECK(k(u) == doctest::Approx(legendre_projection(order, u)).epsilon(1e-12));
  }
}

TEST_CASE("odd and unsupported orders are rejected") {
  for (int order : {0, 1, 3, 5, 10, -2}) CHECK_THROWS_AS(KernelSpec::legendre(order), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec::from_name("gaussian", 2), std::invalid_argument);
}

TEST_CASE("absolute moment is finite and matches a brute-force rule") {
  const auto k = KernelSpec::legendre(4);
  const double b = kernel_abs_moment(k, 4.0);
  CHECK(std::isfinite(b));
  CHECK(b > 0.0);
  const double brute = quad::simpson([&](double u) { return std::pow(std::fabs(u), 4.0) * std::fabs(k(u)); },
                                     -1.0, 1.0, 200001);
  CHECK(b == doctest::Approx(brute).epsilon(1e-7));
  // epanechnikov, s = 1: int |u| 0.75 (1 - u^2) = 0.375
  CHECK(kernel_abs_moment(KernelSpec::epanechnikov(), 1.0) == doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("property: zero outside the support, bounds dominate") {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> outside(1.0, 5.0), inside(-1.0, 1.0);
  std::vector<KernelSpec> ks{KernelSpec::epanechnikov()};
  for (int o : {2, 4, 6, 8}) ks.push_back(KernelSpec::legendre(o));
  for (const auto& k : ks) {
    CAPTURE(k.name());
    for (int i = 0; i < 1000; ++i) {
      const double v = std::nextafter(outside(g), 10.0);
      CHECK(k(v) == 0.0);
      CHECK(k(-v) == 0.0);
    }
    const auto& kb = k.bounds();
    CHECK(kb.beta == 1.0);
    for (int i = 0; i <= 10000; ++i) {
      const double v = -1.0 + 2.0 * i / 10000.0;
      CHECK(std::fabs(k(v)) <= kb.k_max);
      CHECK(std::fabs(k.derivative(v)) <= kb.m);
    }
    for (int i = 0; i < 1000; ++i) {
      const double a = inside(g), b = inside(g);
      CHECK(std::fabs(k(a) - k(b)) <= kb.m * std::fabs(a - b) + 1e-15);
    }
  }
}
