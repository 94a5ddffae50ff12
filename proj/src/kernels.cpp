#include "binomix/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "binomix/quadrature.hpp"

namespace binomix {
namespace {

double horner(std::span<const double> c, double x) {
  double p = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) p = p * x + c[k];
  return p;
}

std::vector<double> differentiate(std::span<const double> c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

// Monomial coefficients of the Legendre polynomials P_0..P_n.
std::vector<std::vector<double>> legendre_table(int n) {
  std::vector<std::vector<double>> p(n + 1);
  p[0] = {1.0};
  if (n >= 1) p[1] = {0.0, 1.0};
  for (int m = 1; m < n; ++m) {
    // (m+1) P_{m+1} = (2m+1) x P_m - m P_{m-1}
    std::vector<double> next(m + 2, 0.0);
    for (std::size_t k = 0; k < p[m].size(); ++k) next[k + 1] += (2.0 * m + 1.0) * p[m][k];
    for (std::size_t k = 0; k < p[m - 1].size(); ++k) next[k] -= m * p[m - 1][k];
    for (double& c : next) c /= (m + 1.0);
    p[m + 1] = std::move(next);
  }
  return p;
}

// sup of |poly| on [-1, 1]: the max over the endpoints and the critical points.
double sup_abs_on_unit(std::span<const double> c) {
  std::vector<double> candidates{-1.0, 0.0, 1.0};
  const auto crit = polynomial_roots(differentiate(c), -1.0, 1.0);
  candidates.insert(candidates.end(), crit.begin(), crit.end());
  double best = 0.0;
  for (double v : candidates) best = std::max(best, std::fabs(horner(c, v)));
  // pad by a few ulps so grid evaluations with rounding never exceed it
  return best * (1.0 + 1e-13);
}

}  // namespace

std::vector<double> polynomial_roots(std::span<const double> coeffs, double lo, double hi) {
  std::vector<double> roots;
  constexpr int kCells = 4096;
  const double step = (hi - lo) / kCells;
  double a = lo;
  double fa = horner(coeffs, a);
  for (int i = 1; i <= kCells; ++i) {
    const double b = i == kCells ? hi : lo + i * step;
    const double fb = horner(coeffs, b);
    if (fa == 0.0 && a > lo) {
      roots.push_back(a);
    } else if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      double l = a, r = b, fl = fa;
      for (int it = 0; it < 200 && r - l > 1e-16; ++it) {
        const double mid = 0.5 * (l + r);
        const double fm = horner(coeffs, mid);
        if ((fm < 0.0) == (fl < 0.0)) {
          l = mid;
          fl = fm;
        } else {
          r = mid;
        }
      }
      roots.push_back(0.5 * (l + r));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

KernelSpec::KernelSpec(KernelFamily family, int order, std::vector<double> coeffs)
    : family_(family), order_(order), coeffs_(std::move(coeffs)) {
  for (std::size_t k = 0; k < coeffs_.size(); k += 2) even_.push_back(coeffs_[k]);
  bounds_.k_max = sup_abs_on_unit(coeffs_);
  bounds_.m = sup_abs_on_unit(differentiate(coeffs_));
  bounds_.beta = 1.0;
  bounds_.b_order = static_cast<double>(order_);
  bounds_.b = kernel_abs_moment(*this, bounds_.b_order);
}

KernelSpec KernelSpec::epanechnikov() {
  return KernelSpec(KernelFamily::epanechnikov, 2, {0.75, 0.0, -0.75});
}

KernelSpec KernelSpec::legendre(int order) {
  if (order % 2 != 0 || order < 2 || order > 8)
    throw std::invalid_argument("legendre kernel order must be one of 2, 4, 6, 8; got " +
                                std::to_string(order));
  const auto p = legendre_table(order);
  std::vector<double> coeffs(order + 1, 0.0);
  for (int m = 0; m <= order; m += 2) {
    // phi_m(0) phi_m(u) = (2m+1)/2 * P_m(0) * P_m(u); odd m vanish at 0
    const double scale = (2.0 * m + 1.0) / 2.0 * p[m][0];
    for (std::size_t k = 0; k < p[m].size(); ++k) coeffs[k] += scale * p[m][k];
  }
  return KernelSpec(KernelFamily::legendre, order, std::move(coeffs));
}

KernelSpec KernelSpec::from_name(const std::string& family, int order) {
  if (family == "epanechnikov") return epanechnikov();
  if (family == "legendre") return legendre(order);
  throw std::invalid_argument("unknown kernel family: " + family);
}

std::string KernelSpec::name() const {
  if (family_ == KernelFamily::epanechnikov) return "epanechnikov";
  return "legendre" + std::to_string(order_);
}

double KernelSpec::operator()(double v) const {
  if (std::fabs(v) > 1.0) return 0.0;
  return horner(coeffs_, v);
}

double KernelSpec::derivative(double v) const {
  double d = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;) d = d * v + static_cast<double>(k) * coeffs_[k];
  return d;
}

double eval_kernel(const KernelSpec& k, double v) { return k(v); }

double kernel_moment(const KernelSpec& k, int j) {
  if (j < 0) throw std::invalid_argument("kernel_moment: j must be >= 0");
  const int nodes = 2 * k.degree() + 8 + (j + 1) / 2;
  const auto c = k.coefficients();
  return quad::integrate_fixed([&](double u) { return std::pow(u, j) * horner(c, u); }, -1.0,
                               1.0, nodes);
}

double kernel_abs_moment(const KernelSpec& k, double s) {
  if (s < 0.0) throw std::invalid_argument("kernel_abs_moment: s must be >= 0");
  const auto c = k.coefficients();
  std::vector<double> cuts = polynomial_roots(c, -1.0, 1.0);
  cuts.push_back(0.0);
  return quad::adaptive(
      [&](double u) { return std::pow(std::fabs(u), s) * std::fabs(horner(c, u)); }, -1.0, 1.0,
      cuts, 1e-13);
}

}  // namespace binomix
