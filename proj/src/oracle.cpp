#include "binomix/oracle.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <map>
#include <stdexcept>

#include "binomix/estimator.hpp"
#include "binomix/quadrature.hpp"

namespace binomix {
namespace {

void check_t(std::int64_t t) {
  if (t < 1) throw std::invalid_argument("trials must be >= 1");
}

// C(t, x) B(x + a, t - x + b) / B(a, b) for integer a, b >= 1, as a product of
// ratios that stays near 1 in magnitude.
double integer_beta_mass(std::int64_t t, std::int64_t x, int a, int b) {
  const double td = static_cast<double>(t), xd = static_cast<double>(x);
  double r = 1.0;
  for (int j = 1; j <= a - 1; ++j) r *= (xd + j) / (td + j);
  for (int j = 1; j <= b - 1; ++j) r *= (td - xd + j) / (td + a - 1 + j);
  r /= td + a + b - 1;
  // (a+b-1)! / ((a-1)! (b-1)!)
  double c = 1.0;
  for (int j = 1; j <= b - 1; ++j) c = c * (a - 1 + j) / j;
  return r * c * (a + b - 1);
}

double lbeta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// I_hi - I_lo for the regularized incomplete beta, taking the complement when
// both are close to 1.
double ibeta_diff(double a, double b, double lo, double hi) {
  const double ilo = lo <= 0.0 ? 0.0 : boost::math::ibeta(a, b, lo);
  if (ilo > 0.5) {
    const double clo = boost::math::ibetac(a, b, lo);
    const double chi = hi >= 1.0 ? 0.0 : boost::math::ibetac(a, b, hi);
    return clo - chi;
  }
  const double ihi = hi >= 1.0 ? 1.0 : boost::math::ibeta(a, b, hi);
  return ihi - ilo;
}

double abs_lattice_mean(const RealFn& f, std::int64_t t) {
  double s = 0.0;
  for (std::int64_t x = 0; x <= t; ++x) s += std::fabs(f(static_cast<double>(x) / t));
  return s / static_cast<double>(t + 1);
}

template <class F>
double average_over_trials(std::span<const std::int64_t> trials, F per_t) {
  if (trials.empty()) throw std::invalid_argument("trials list is empty");
  std::map<std::int64_t, std::size_t> counts;
  for (auto t : trials) {
    check_t(t);
    ++counts[t];
  }
  double s = 0.0;
  for (const auto& [t, c] : counts) s += static_cast<double>(c) * per_t(t);
  return s / static_cast<double>(trials.size());
}

}  // namespace

std::vector<double> exact_mixture_pmf(const DensitySpec& p, std::int64_t t) {
  check_t(t);
  std::vector<double> m(static_cast<std::size_t>(t) + 1, 0.0);
  if (p.integer_beta()) {
    const int a = static_cast<int>(p.beta_a()), b = static_cast<int>(p.beta_b());
    for (std::int64_t x = 0; x <= t; ++x) m[x] = integer_beta_mass(t, x, a, b);
    return m;
  }
  if (p.form() == DensityForm::beta) {
    const double a = p.beta_a(), b = p.beta_b(), td = static_cast<double>(t);
    const double lc = std::lgamma(td + 1.0);
    for (std::int64_t x = 0; x <= t; ++x) {
      const double xd = static_cast<double>(x);
      m[x] = std::exp(lc - std::lgamma(xd + 1.0) - std::lgamma(td - xd + 1.0) +
                      lbeta(xd + a, td - xd + b) - lbeta(a, b));
    }
    return m;
  }
  // piecewise: C(t,x) int_lo^hi q^(x+k) (1-q)^(t-x) dq
  //          = prod_{j=1}^k (x+j) / prod_{j=1}^{k+1} (t+j) * [I_hi - I_lo](x+k+1, t-x+1)
  const double td = static_cast<double>(t);
  for (std::int64_t x = 0; x <= t; ++x) {
    const double xd = static_cast<double>(x);
    double acc = 0.0;
    for (const auto& pc : p.pieces()) {
      double ratio = 1.0 / (td + 1.0);
      for (std::size_t k = 0; k < pc.coeffs.size(); ++k) {
        if (k > 0) ratio *= (xd + static_cast<double>(k)) / (td + static_cast<double>(k) + 1.0);
        if (pc.coeffs[k] == 0.0) continue;
        acc += pc.coeffs[k] * ratio *
               ibeta_diff(xd + static_cast<double>(k) + 1.0, td - xd + 1.0, pc.lo, pc.hi);
      }
    }
    m[x] = acc;
  }
  return m;
}

double integrate_against(const RealFn& f, const DensitySpec& p, std::span<const double> f_breaks) {
  std::vector<double> cuts(f_breaks.begin(), f_breaks.end());
  for (double b : p.breakpoints()) cuts.push_back(b);
  return quad::adaptive([&](double q) { return f(q) * p.pdf(q); }, 0.0, 1.0, cuts, 1e-10);
}

double bernstein_error_exact(const RealFn& f, const DensitySpec& p, std::int64_t t,
                             std::span<const double> f_breaks) {
  const auto m = exact_mixture_pmf(p, t);
  double s = 0.0;
  for (std::int64_t x = 0; x <= t; ++x) s += f(static_cast<double>(x) / t) * m[x];
  return s - integrate_against(f, p, f_breaks);
}

double quasi_riemann_error(const RealFn& f, const DensitySpec& p, std::int64_t t,
                           std::span<const double> f_breaks) {
  check_t(t);
  double s = 0.0;
  for (std::int64_t x = 0; x <= t; ++x) {
    const double q = static_cast<double>(x) / t;
    s += f(q) * p.pdf(q);
  }
  return std::fabs(s / static_cast<double>(t) - integrate_against(f, p, f_breaks));
}

double g_factor(double t, const SmoothnessParams& sp) {
  if (!(t >= 1.0)) throw std::invalid_argument("trials must be >= 1");
  return sp.L * std::pow(0.25 / (t + 3.0), sp.alpha / 2.0) +
         sp.L * std::pow(1.0 / (t + 2.0), sp.alpha) + sp.p_max / t;
}

double lemma1_bound(const RealFn& f, const DensitySpec& p, const SmoothnessParams& sp,
                    std::span<const std::int64_t> trials, std::span<const double> f_breaks) {
  return average_over_trials(trials, [&](std::int64_t t) {
    return g_factor(static_cast<double>(t), sp) * abs_lattice_mean(f, t) +
           quasi_riemann_error(f, p, t, f_breaks);
  });
}

double lemma1_bound_analytic(const RealFn& f, const SmoothnessParams& sp,
                             std::span<const std::int64_t> trials, double h,
                             const KernelBounds& kb) {
  return average_over_trials(trials, [&](std::int64_t t) {
    const double td = static_cast<double>(t);
    return g_factor(td, sp) * abs_lattice_mean(f, t) + proposition3_bound(td, h, sp, kb);
  });
}

double proposition3_bound(double t, double h, const SmoothnessParams& sp,
                          const KernelBounds& kb) {
  if (!(t >= 1.0) || !(h > 0.0)) throw std::invalid_argument("need t >= 1 and h > 0");
  const double ht = h * t;
  return kb.k_max * sp.p_max / ht +
         (2.0 + 1.0 / ht) * (sp.L * kb.k_max * std::pow(1.0 / t, sp.alpha) +
                             2.0 * kb.m * sp.p_max * std::pow(1.0 / ht, kb.beta));
}

RealFn scaled_kernel(const KernelSpec& k, double h, double u) {
  return [k, h, u](double q) { return k((q - u) / h) / h; };
}

std::vector<double> scaled_kernel_breaks(double h, double u) { return {u - h, u, u + h}; }

int floor_strict(double s) { return static_cast<int>(std::ceil(s)) - 1; }

double theorem1_smoothing_term(const SmoothnessParams& sp, const KernelSpec& k, double h) {
  if (sp.L == 0.0) return 0.0;
  const double b = kernel_abs_moment(k, sp.s);
  return sp.L * b * std::pow(h, sp.s) / std::tgamma(floor_strict(sp.s) + 1.0);
}

double theorem1_bias_bound(const SmoothnessParams& sp, const KernelSpec& k,
                           std::span<const std::int64_t> trials, double h, double u) {
  if (!(h > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  const RealFn kh = scaled_kernel(k, h, u);
  const double avg = average_over_trials(trials, [&](std::int64_t t) {
    const double td = static_cast<double>(t);
    return g_factor(td, sp) * abs_lattice_mean(kh, t) + proposition3_bound(td, h, sp, k.bounds());
  });
  return theorem1_smoothing_term(sp, k, h) + avg;
}

double theorem1_variance_bound(double p_max, const KernelBounds& kb, std::size_t n, double h,
                               std::span<const std::int64_t> trials) {
  if (n == 0 || !(h > 0.0)) throw std::invalid_argument("need n >= 1 and h > 0");
  const double tt = harmonic_mean(trials);
  return kb.k_max * kb.k_max * p_max * (2.0 + 1.0 / (h * tt)) / (static_cast<double>(n) * h);
}

double exact_kde_expectation(const DensitySpec& p, std::span<const std::int64_t> trials,
                             const KernelSpec& k, double h, double u) {
  if (!(h > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  return average_over_trials(trials, [&](std::int64_t t) {
    const auto m = exact_mixture_pmf(p, t);
    double s = 0.0;
    for (std::int64_t x = 0; x <= t; ++x) s += k((static_cast<double>(x) / t - u) / h) * m[x];
    return s / h;
  });
}

RateTerms corollary1_rates(std::size_t n, std::span<const std::int64_t> trials, double h,
                           const SmoothnessParams& sp) {
  if (n == 0 || !(h > 0.0) || !(sp.s > 0.0))
    throw std::invalid_argument("need n >= 1, h > 0, s > 0");
  RateTerms r;
  r.t_tilde = harmonic_mean(trials);
  r.smoothing = std::pow(h, sp.s);
  r.hetero = 1.0 / std::sqrt(r.t_tilde);
  r.riemann = 1.0 / (h * r.t_tilde);
  r.variance = 1.0 / (static_cast<double>(n) * h);
  const double nd = static_cast<double>(n), inv_s = 1.0 / sp.s;
  r.trials_threshold_bias = std::pow(nd, (1.0 + inv_s) / (2.0 + inv_s));
  r.trials_threshold = std::pow(nd, 2.0 / (2.0 + inv_s));
  return r;
}

double g_tau(double t, const SmoothnessParams& tau) { return g_factor(t, tau); }

double r_tau(double t, double h, const SmoothnessParams& tau, const KernelBounds& kb) {
  return proposition3_bound(t, h, tau, kb);
}

DiffBounds corollary2_bounds(const SmoothnessParams& tau, const KernelSpec& k,
                             std::span<const std::int64_t> trials, double h, double u,
                             std::size_t n, double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("eps must lie in (0, 0.5]");
  DiffBounds d;
  d.bias_bound = theorem1_bias_bound(tau, k, trials, h, u);
  d.variance_bound = theorem1_variance_bound(tau.p_max, k.bounds(), n, h, trials) / (eps * eps);
  return d;
}

}  // namespace binomix
