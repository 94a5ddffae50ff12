#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "binomix/kernels.hpp"
#include "binomix/sample.hpp"

namespace binomix {

struct EstimateResult {
  double u = 0.0;
  double estimate = 0.0;
  double se = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double h = 0.0;
  double alpha = 0.0;
};

/// (1/n) sum_i K((p_i - u)/h)/h over raw points p_i. No argument checks.
double kde_points(std::span<const double> points, const KernelSpec& k, double h, double u);

/// Empirical-proportion KDE at u in (0, 1). With clamp_nonneg, negative values
/// are reported as 0.
double kde_at(const BinomialSample& s, const KernelSpec& k, double h, double u,
              bool clamp_nonneg = false);
std::vector<double> kde_grid(const BinomialSample& s, const KernelSpec& k, double h,
                             std::span<const double> grid, bool clamp_nonneg = false);

double harmonic_mean(std::span<const std::int64_t> trials);

/// 1/(n(n-1)) sum_i {K_h(x_i/t_i) - p_hat(u)}^2.
double variance_estimate(const BinomialSample& s, const KernelSpec& k, double h, double u);

/// z with P(Z <= z) = p for a standard normal Z.
double normal_quantile(double p);

/// estimate +- z_{1-alpha/2} * se with se = sqrt(variance_estimate).
EstimateResult confidence_interval(const BinomialSample& s, const KernelSpec& k, double h,
                                   double u, double alpha);

namespace detail {
void check_h_u(double h, double u);
}

}  // namespace binomix
