#pragma once

#include <span>
#include <string>
#include <vector>

namespace binomix {

enum class KernelFamily { epanechnikov, legendre };

/// Constants entering the error bounds. All are computed numerically when the
/// kernel is built.
struct KernelBounds {
  double k_max = 0.0;  // sup |K|
  double m = 0.0;      // Hoelder constant of K on [-1, 1]
  double beta = 1.0;   // Hoelder exponent; 1 for polynomial kernels
  double b = 0.0;      // int |u|^s |K(u)| du at s = b_order
  double b_order = 0.0;
};

/// A bounded polynomial kernel supported on [-1, 1] (closed). Immutable.
class KernelSpec {
 public:
  /// K(v) = 0.75 (1 - v^2).
  static KernelSpec epanechnikov();
  /// K(u) = sum_{m=0}^{order} phi_m(0) phi_m(u), phi_m the orthonormal Legendre
  /// polynomials on [-1, 1]. Supported orders: 2, 4, 6, 8.
  static KernelSpec legendre(int order);
  /// "epanechnikov" or "legendre" with the given order.
  static KernelSpec from_name(const std::string& family, int order);

  KernelFamily family() const { return family_; }
  int order() const { return order_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::string name() const;

  /// Monomial coefficients of K in v on [-1, 1], lowest degree first.
  std::span<const double> coefficients() const { return coeffs_; }
  /// Coefficients of K in powers of v^2 (odd coefficients are zero).
  std::span<const double> even_coefficients() const { return even_; }
  const KernelBounds& bounds() const { return bounds_; }

  double operator()(double v) const;
  /// K'(v) of the polynomial piece, for |v| <= 1.
  double derivative(double v) const;

 private:
  KernelSpec(KernelFamily family, int order, std::vector<double> coeffs);

  KernelFamily family_;
  int order_;
  std::vector<double> coeffs_;
  std::vector<double> even_;
  KernelBounds bounds_;
};

double eval_kernel(const KernelSpec& k, double v);

/// int u^j K(u) du by Gauss-Legendre with 2 * degree + 8 nodes (exact).
double kernel_moment(const KernelSpec& k, int j);

/// int |u|^s |K(u)| du, integrated piecewise between the sign changes of K.
double kernel_abs_moment(const KernelSpec& k, double s);

/// Real roots of the polynomial with the given monomial coefficients in the
/// open interval (lo, hi), found by bracketing on a fine grid.
std::vector<double> polynomial_roots(std::span<const double> coeffs, double lo, double hi);

}  // namespace binomix
