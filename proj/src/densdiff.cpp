#include "binomix/densdiff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "binomix/error.hpp"
#include "binomix/estimator.hpp"
#include "binomix/parallel.hpp"
#include "binomix/quadrature.hpp"
#include "binomix/rng.hpp"
#include "binomix/simd.hpp"

namespace binomix {
namespace {

constexpr std::uint64_t kFoldTag = 0x464f4c44ULL;
constexpr int kMaxRedraws = 10;

double weighted_sum(const TwoGroupSample& s, const KernelSpec& k, double h, double u) {
  if (s.group_size(0) == 0 || s.group_size(1) == 0)
    throw DataError("positivity violated: both groups must be present");
  detail::check_h_u(h, u);
  const auto w = difference_weights(s);
  return simd::kernel_sum(s.values(), w, k.even_coefficients(), u, 1.0 / h) / h;
}

std::vector<double> eval_weights(const TwoGroupSample& eval) {
  const double a = eval.abar();
  std::vector<double> w(eval.size());
  for (std::size_t j = 0; j < w.size(); ++j)
    w[j] = eval.groups()[j] == 1 ? 1.0 / a : -1.0 / (1.0 - a);
  return w;
}

std::vector<double> group_values(const TwoGroupSample& s, int a) {
  std::vector<double> out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.groups()[i] == a) out.push_back(s.values()[i]);
  return out;
}

bool better(const RiskEntry& cand, const RiskEntry& best) {
  if (cand.risk != best.risk) return cand.risk < best.risk;
  if (cand.pair.h != best.pair.h) return cand.pair.h > best.pair.h;
  return cand.pair.order < best.pair.order;
}

TuningPair argmin(const std::vector<RiskEntry>& risks) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < risks.size(); ++i)
    if (better(risks[i], risks[best])) best = i;
  return risks[best].pair;
}

void check_grid(std::span<const TuningPair> grid) {
  if (grid.empty()) throw std::invalid_argument("tuning grid is empty");
  for (const auto& p : grid) {
    if (!(p.h > 0.0)) throw std::invalid_argument("tuning bandwidths must be positive");
    legendre_kernel(p.order);
  }
}

}  // namespace

const KernelSpec& legendre_kernel(int order) {
  static const std::vector<KernelSpec> kernels = [] {
    std::vector<KernelSpec> v;
    for (int l = 2; l <= 8; l += 2) v.push_back(KernelSpec::legendre(l));
    return v;
  }();
  if (order % 2 != 0 || order < 2 || order > 8)
    throw std::invalid_argument("kernel order must be one of 2, 4, 6, 8; got " +
                                std::to_string(order));
  return kernels[static_cast<std::size_t>(order / 2 - 1)];
}

std::vector<TuningPair> tuning_grid(std::span<const double> hs, std::span<const int> orders) {
  std::vector<TuningPair> out;
  for (double h : hs)
    for (int o : orders) out.push_back({h, o});
  return out;
}

std::vector<double> difference_weights(const TwoGroupSample& s) {
  const double a = s.abar();
  const double n = static_cast<double>(s.size());
  std::vector<double> w(s.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = (s.groups()[i] == 1 ? 1.0 / a : -1.0 / (1.0 - a)) / n;
  return w;
}

double diff_kde_true(const TwoGroupSample& s, const KernelSpec& k, double h, double u) {
  if (s.binomial()) throw std::invalid_argument("sample holds binomial counts, not proportions");
  return weighted_sum(s, k, h, u);
}

double diff_kde_binomial(const TwoGroupSample& s, const KernelSpec& k, double h, double u) {
  if (!s.binomial()) throw std::invalid_argument("sample holds true proportions, not counts");
  return weighted_sum(s, k, h, u);
}

WeightedKde::WeightedKde(std::span<const double> values, std::span<const double> weights,
                         const KernelSpec& k, double h)
    : coeffs_(k.even_coefficients().begin(), k.even_coefficients().end()),
      degree_(k.degree()),
      h_(h) {
  if (values.size() != weights.size()) throw std::invalid_argument("values/weights mismatch");
  if (!(h > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  v_.reserve(idx.size());
  w_.reserve(idx.size());
  for (std::size_t i : idx) {
    v_.push_back(values[i]);
    w_.push_back(weights[i]);
  }
}

double WeightedKde::operator()(double u) const {
  const double reach = h_ * (1.0 + 1e-9);
  const auto lo = std::lower_bound(v_.begin(), v_.end(), u - reach) - v_.begin();
  const auto hi = std::upper_bound(v_.begin(), v_.end(), u + reach) - v_.begin();
  if (hi <= lo) return 0.0;
  const std::size_t len = static_cast<std::size_t>(hi - lo);
  return simd::kernel_sum(std::span<const double>(v_.data() + lo, len),
                          std::span<const double>(w_.data() + lo, len), coeffs_, u, 1.0 / h_) /
         h_;
}

double WeightedKde::integrate_power(int power) const {
  std::vector<double> cuts{0.0, 1.0};
  cuts.reserve(2 * v_.size() + 2);
  for (double v : v_) {
    for (double c : {v - h_, v + h_})
      if (c > 0.0 && c < 1.0) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  // f^power is a polynomial of degree power * degree_ on each piece
  const auto& rule = quad::gauss_legendre(power * degree_ / 2 + 1);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double f = (*this)(mid + half * rule.nodes[q]);
      s += rule.weights[q] * (power == 2 ? f * f : f);
    }
    total += half * s;
  }
  return total;
}

double WeightedKde::integrate_square() const { return integrate_power(2); }
double WeightedKde::integrate() const { return integrate_power(1); }

JointRisk joint_pseudo_risk_detail(const TwoGroupSample& fit, const TwoGroupSample& eval,
                                   const KernelSpec& k, double h, double eps,
                                   std::size_t total_n) {
  if (eval.size() == 0) throw DataError("evaluation fold is empty");
  check_positivity(fit, eps);
  check_positivity(eval, eps);
  if (!(h > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  const WeightedKde tau(fit.values(), difference_weights(fit), k, h);
  const auto we = eval_weights(eval);
  double cross = 0.0;
  for (std::size_t j = 0; j < eval.size(); ++j) cross += we[j] * tau(eval.values()[j]);
  if (total_n == 0) total_n = fit.size() + eval.size();
  JointRisk r;
  r.integral = tau.integrate_square();
  r.risk = r.integral - 2.0 * cross / static_cast<double>(eval.size());
  r.risk_total_n = r.integral - 2.0 * cross / static_cast<double>(total_n);
  return r;
}

double joint_pseudo_risk(const TwoGroupSample& fit, const TwoGroupSample& eval,
                         const KernelSpec& k, double h, double eps) {
  return joint_pseudo_risk_detail(fit, eval, k, h, eps).risk;
}

double density_pseudo_risk(std::span<const double> fit, std::span<const double> eval,
                           const KernelSpec& k, double h) {
  if (fit.empty() || eval.empty()) throw DataError("pseudo-risk needs nonempty folds");
  const std::vector<double> w(fit.size(), 1.0 / static_cast<double>(fit.size()));
  const WeightedKde p(fit, w, k, h);
  double cross = 0.0;
  for (double q : eval) cross += p(q);
  return p.integrate_square() - 2.0 * cross / static_cast<double>(eval.size());
}

FoldSplit split_folds(const TwoGroupSample& s, std::uint64_t seed, double eps) {
  const std::size_t n = s.size();
  if (n < 4) throw DataError("two-fold split needs at least 4 records");
  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    auto eng = rng::stream(seed, {kFoldTag, static_cast<std::uint64_t>(attempt)});
    std::shuffle(perm.begin(), perm.end(), eng);
    FoldSplit f;
    f.fit.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n / 2));
    f.eval.assign(perm.begin() + static_cast<std::ptrdiff_t>(n / 2), perm.end());
    f.redraws = attempt;
    try {
      check_positivity(s.subset(f.fit), eps);
      check_positivity(s.subset(f.eval), eps);
      return f;
    } catch (const DataError&) {
    }
  }
  throw DataError("no fold split satisfying positivity after " + std::to_string(kMaxRedraws) +
                  " redraws");
}

JointTuning select_tuning_joint(const TwoGroupSample& s, std::span<const TuningPair> grid,
                                std::uint64_t seed, double eps, unsigned workers) {
  check_grid(grid);
  check_positivity(s, eps);
  JointTuning out;
  out.folds = split_folds(s, seed, eps);
  const TwoGroupSample fit = s.subset(out.folds.fit);
  const TwoGroupSample eval = s.subset(out.folds.eval);
  out.risks.resize(grid.size());
  parallel_for(
      grid.size(),
      [&](std::size_t g) {
        const auto r = joint_pseudo_risk_detail(fit, eval, legendre_kernel(grid[g].order),
                                                grid[g].h, eps, s.size());
        out.risks[g] = {grid[g], r.risk, r.risk_total_n};
      },
      workers);
  out.selected = argmin(out.risks);
  return out;
}

SeparateTuning select_tuning_separate(const TwoGroupSample& s, std::span<const TuningPair> grid,
                                      std::uint64_t seed, double eps, unsigned workers) {
  check_grid(grid);
  check_positivity(s, eps);
  SeparateTuning out;
  out.folds = split_folds(s, seed, eps);
  const TwoGroupSample fit = s.subset(out.folds.fit);
  const TwoGroupSample eval = s.subset(out.folds.eval);
  const auto fit1 = group_values(fit, 1), fit0 = group_values(fit, 0);
  const auto eval1 = group_values(eval, 1), eval0 = group_values(eval, 0);
  out.risks1.resize(grid.size());
  out.risks0.resize(grid.size());
  parallel_for(
      2 * grid.size(),
      [&](std::size_t task) {
        const std::size_t g = task / 2;
        const KernelSpec& k = legendre_kernel(grid[g].order);
        if (task % 2 == 0) {
          const double r = density_pseudo_risk(fit1, eval1, k, grid[g].h);
          out.risks1[g] = {grid[g], r, r};
        } else {
          const double r = density_pseudo_risk(fit0, eval0, k, grid[g].h);
          out.risks0[g] = {grid[g], r, r};
        }
      },
      workers);
  out.group1 = argmin(out.risks1);
  out.group0 = argmin(out.risks0);
  return out;
}

double diff_estimate(const TwoGroupSample& fit, const TuningPair& pair, double u) {
  return weighted_sum(fit, legendre_kernel(pair.order), pair.h, u);
}

double diff_estimate_separate(const TwoGroupSample& fit, const TuningPair& pair1,
                              const TuningPair& pair0, double u) {
  detail::check_h_u(pair1.h, u);
  detail::check_h_u(pair0.h, u);
  const auto v1 = group_values(fit, 1), v0 = group_values(fit, 0);
  if (v1.empty() || v0.empty()) throw DataError("positivity violated: both groups must be present");
  return kde_points(v1, legendre_kernel(pair1.order), pair1.h, u) -
         kde_points(v0, legendre_kernel(pair0.order), pair0.h, u);
}

}  // namespace binomix
