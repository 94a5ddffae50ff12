#pragma once

// Exact Bernstein-approximation errors and the closed-form error bounds they
// are checked against. Bound functions take their constants as inputs.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "binomix/density.hpp"
#include "binomix/kernels.hpp"

namespace binomix {

using RealFn = std::function<double(double)>;

/// m(x) = C(t, x) int q^x (1-q)^(t-x) p(q) dq for x = 0..t.
std::vector<double> exact_mixture_pmf(const DensitySpec& p, std::int64_t t);

/// sum_x f(x/t) m(x) - int f p. `f_breaks` lists points where f is not smooth.
double bernstein_error_exact(const RealFn& f, const DensitySpec& p, std::int64_t t,
                             std::span<const double> f_breaks = {});

/// |sum_{x=0}^t f(x/t) p(x/t) / t - int f p|.
double quasi_riemann_error(const RealFn& f, const DensitySpec& p, std::int64_t t,
                           std::span<const double> f_breaks = {});

/// int_0^1 f(q) p(q) dq, adaptive with breakpoints from f and p.
double integrate_against(const RealFn& f, const DensitySpec& p,
                         std::span<const double> f_breaks = {});

double g_factor(double t, const SmoothnessParams& sp);

/// (1/n) sum_i { g(t_i) sum_x |f(x/t_i)| / (t_i + 1) + quasi-Riemann error at t_i }.
double lemma1_bound(const RealFn& f, const DensitySpec& p, const SmoothnessParams& sp,
                    std::span<const std::int64_t> trials, std::span<const double> f_breaks = {});
/// Same with the quasi-Riemann term replaced by proposition3_bound(t_i, h).
double lemma1_bound_analytic(const RealFn& f, const SmoothnessParams& sp,
                             std::span<const std::int64_t> trials, double h,
                             const KernelBounds& kb);

/// r(h, t): K_max p_max/(ht) + (2 + 1/(ht)) {L K_max t^-alpha + 2 M p_max (ht)^-beta}.
double proposition3_bound(double t, double h, const SmoothnessParams& sp, const KernelBounds& kb);

/// K_h(q) = K((q - u)/h)/h as a callable, with its support ends.
RealFn scaled_kernel(const KernelSpec& k, double h, double u);
std::vector<double> scaled_kernel_breaks(double h, double u);

/// Largest integer strictly below s.
int floor_strict(double s);

/// L B h^s / floor_strict(s)! + (1/n) sum_i { g(t_i) sum_x |K_h(x/t_i)|/(t_i+1) + r(h, t_i) },
/// with B = int |u|^s |K|.
double theorem1_bias_bound(const SmoothnessParams& sp, const KernelSpec& k,
                           std::span<const std::int64_t> trials, double h, double u);
/// Smoothing part only: L B h^s / floor_strict(s)!.
double theorem1_smoothing_term(const SmoothnessParams& sp, const KernelSpec& k, double h);

/// K_max^2 p_max (2 + 1/(h t~)) / (n h).
double theorem1_variance_bound(double p_max, const KernelBounds& kb, std::size_t n, double h,
                               std::span<const std::int64_t> trials);

/// E{p_hat_h(u)} = (1/n) sum_i sum_x K_h(x/t_i) m_i(x).
double exact_kde_expectation(const DensitySpec& p, std::span<const std::int64_t> trials,
                             const KernelSpec& k, double h, double u);

struct RateTerms {
  double smoothing = 0.0;  // h^s
  double hetero = 0.0;     // 1/sqrt(t~)
  double riemann = 0.0;    // 1/(h t~)
  double variance = 0.0;   // 1/(n h)
  double t_tilde = 0.0;
  double trials_threshold_bias = 0.0;  // n^{(1+1/s)/(2+1/s)}
  double trials_threshold = 0.0;       // n^{2/(2+1/s)}
};
RateTerms corollary1_rates(std::size_t n, std::span<const std::int64_t> trials, double h,
                           const SmoothnessParams& sp);

struct DiffBounds {
  double bias_bound = 0.0;
  double variance_bound = 0.0;
};
/// Bias and variance bounds for the two-group difference estimator, with the
/// difference's constants (L_tau, alpha, tau_max, gamma = s) in `tau`.
double g_tau(double t, const SmoothnessParams& tau);
double r_tau(double t, double h, const SmoothnessParams& tau, const KernelBounds& kb);
DiffBounds corollary2_bounds(const SmoothnessParams& tau, const KernelSpec& k,
                             std::span<const std::int64_t> trials, double h, double u,
                             std::size_t n, double eps);

}  // namespace binomix
