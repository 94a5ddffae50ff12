#pragma once

#include <functional>
#include <span>
#include <vector>

namespace binomix::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1.
/// Rules are cached per n and safe to request concurrently.
const Rule& gauss_legendre(int n);

double integrate_fixed(const std::function<double(double)>& f, double a, double b, int n);

/// Composite Simpson rule on [a, b] with `nodes` (odd, >= 3) equispaced nodes.
double simpson(const std::function<double(double)>& f, double a, double b, int nodes);

/// Adaptive Gauss-Kronrod (15/31) integration of f on [a, b], split first at
/// every breakpoint that falls strictly inside (a, b). The requested tolerance
/// is absolute per subinterval.
double adaptive(const std::function<double(double)>& f, double a, double b,
                std::span<const double> breakpoints = {}, double abs_tol = 1e-12);

}  // namespace binomix::quad
