#include "binomix/estimator.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

#include "binomix/error.hpp"
#include "binomix/simd.hpp"

namespace binomix {

void detail::check_h_u(double h, double u) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("bandwidth must be positive, got " + std::to_string(h));
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("evaluation point must lie in (0, 1), got " + std::to_string(u));
}

double kde_points(std::span<const double> points, const KernelSpec& k, double h, double u) {
  if (points.empty()) return 0.0;
  const double s = simd::kernel_sum(points, {}, k.even_coefficients(), u, 1.0 / h);
  return s / (static_cast<double>(points.size()) * h);
}

double kde_at(const BinomialSample& s, const KernelSpec& k, double h, double u,
              bool clamp_nonneg) {
  if (s.empty()) throw DataError("no data: the sample is empty");
  detail::check_h_u(h, u);
  const double v = kde_points(s.proportions(), k, h, u);
  return clamp_nonneg && v < 0.0 ? 0.0 : v;
}

std::vector<double> kde_grid(const BinomialSample& s, const KernelSpec& k, double h,
                             std::span<const double> grid, bool clamp_nonneg) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double u : grid) out.push_back(kde_at(s, k, h, u, clamp_nonneg));
  return out;
}

double harmonic_mean(std::span<const std::int64_t> trials) {
  if (trials.empty()) throw DataError("harmonic mean of an empty list");
  double inv = 0.0;
  for (auto t : trials) {
    if (t < 1) throw DataError("trials must be >= 1");
    inv += 1.0 / static_cast<double>(t);
  }
  return static_cast<double>(trials.size()) / inv;
}

double variance_estimate(const BinomialSample& s, const KernelSpec& k, double h, double u) {
  detail::check_h_u(h, u);
  const std::size_t n = s.size();
  if (n < 2) throw DataError("variance estimate needs at least 2 records");
  std::vector<double> kh(n);
  simd::kernel_eval(s.proportions(), k.even_coefficients(), u, 1.0 / h, kh);
  for (double& v : kh) v /= h;
  // mean as a shift from the first value: exact when all records coincide
  double shift = 0.0;
  for (double v : kh) shift += v - kh[0];
  const double mean = kh[0] + shift / static_cast<double>(n);
  const double ss = simd::sum_sq_dev(kh, mean);
  return ss / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal quantile needs p in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

EstimateResult confidence_interval(const BinomialSample& s, const KernelSpec& k, double h,
                                   double u, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  EstimateResult r;
  r.u = u;
  r.h = h;
  r.alpha = alpha;
  r.estimate = kde_at(s, k, h, u);
  r.se = std::sqrt(variance_estimate(s, k, h, u));
  if (r.se > 0.0) {
    const double z = normal_quantile(1.0 - alpha / 2.0);
    r.ci_lo = r.estimate - z * r.se;
    r.ci_hi = r.estimate + z * r.se;
  } else {
    r.ci_lo = r.ci_hi = r.estimate;
  }
  return r;
}

}  // namespace binomix
