#pragma once

// Two-group density difference tau = p_1 - p_0 by weighted kernel sums, with
// two-fold cross-validated choice of (bandwidth, kernel order).

#include <cstdint>
#include <span>
#include <vector>

#include "binomix/kernels.hpp"
#include "binomix/sample.hpp"

namespace binomix {

struct TuningPair {
  double h = 0.0;
  int order = 2;  // Legendre kernel order
  bool operator==(const TuningPair&) const = default;
};

/// Every (h, order) combination.
std::vector<TuningPair> tuning_grid(std::span<const double> hs, std::span<const int> orders);

/// (1/n) sum_i (A_i/abar - (1 - A_i)/(1 - abar)) K_h(Q_i) on true proportions.
double diff_kde_true(const TwoGroupSample& s, const KernelSpec& k, double h, double u);
/// Same with Q_i replaced by x_i/t_i.
double diff_kde_binomial(const TwoGroupSample& s, const KernelSpec& k, double h, double u);

/// Weighted kernel sum f(u) = sum_i w_i K((v_i - u)/h)/h over sorted points,
/// evaluated only on the window of points that can reach u.
class WeightedKde {
 public:
  WeightedKde(std::span<const double> values, std::span<const double> weights,
              const KernelSpec& k, double h);
  double operator()(double u) const;
  /// int_0^1 f(u)^2 du, exact up to round-off: f is a polynomial between the
  /// points v_i -+ h, integrated by Gauss-Legendre on each piece.
  double integrate_square() const;
  /// int_0^1 f(u) du, exact in the same way.
  double integrate() const;

 private:
  double integrate_power(int power) const;
  std::vector<double> v_;
  std::vector<double> w_;
  std::vector<double> coeffs_;
  int degree_;
  double h_;
};

/// Weights A_i/abar - (1 - A_i)/(1 - abar) divided by n.
std::vector<double> difference_weights(const TwoGroupSample& s);

struct JointRisk {
  double risk = 0.0;           // cross term normalized by the eval-fold size
  double risk_total_n = 0.0;   // cross term normalized by the full sample size
  double integral = 0.0;       // int tau^2
};

/// int tau_fit^2 - (2/n_2) sum_{eval} w_j tau_fit(Q_j); abar of the weights is
/// taken on the eval fold. `total_n` (0: fit + eval) sets the alternative normalization.
JointRisk joint_pseudo_risk_detail(const TwoGroupSample& fit, const TwoGroupSample& eval,
                                   const KernelSpec& k, double h, double eps = 0.05,
                                   std::size_t total_n = 0);
double joint_pseudo_risk(const TwoGroupSample& fit, const TwoGroupSample& eval,
                         const KernelSpec& k, double h, double eps = 0.05);

/// int p^2 - (2/n_2) sum_{eval} p(Q_j) for a single-group KDE.
double density_pseudo_risk(std::span<const double> fit, std::span<const double> eval,
                           const KernelSpec& k, double h);

struct FoldSplit {
  std::vector<std::size_t> fit;   // first floor(n/2) of the permutation
  std::vector<std::size_t> eval;  // the rest
  int redraws = 0;
};

/// Seeded 50/50 split; redrawn up to 10 times while either fold violates
/// positivity, then DataError.
FoldSplit split_folds(const TwoGroupSample& s, std::uint64_t seed, double eps = 0.05);

struct RiskEntry {
  TuningPair pair;
  double risk = 0.0;
  double risk_total_n = 0.0;
};

struct JointTuning {
  TuningPair selected;
  std::vector<RiskEntry> risks;  // in grid order
  FoldSplit folds;
};

struct SeparateTuning {
  TuningPair group1;
  TuningPair group0;
  std::vector<RiskEntry> risks1;
  std::vector<RiskEntry> risks0;
  FoldSplit folds;
};

/// Minimizer of the joint pseudo-risk; ties go to the larger h, then the smaller order.
JointTuning select_tuning_joint(const TwoGroupSample& s, std::span<const TuningPair> grid,
                                std::uint64_t seed, double eps = 0.05, unsigned workers = 0);
/// Per-group minimizers of the single-density pseudo-risk on the same folds.
SeparateTuning select_tuning_separate(const TwoGroupSample& s, std::span<const TuningPair> grid,
                                      std::uint64_t seed, double eps = 0.05,
                                      unsigned workers = 0);

/// Difference estimate from the fit fold with one tuning pair.
double diff_estimate(const TwoGroupSample& fit, const TuningPair& pair, double u);
/// p_1 (group 1, pair1) minus p_0 (group 0, pair0), both fit on `fit`.
double diff_estimate_separate(const TwoGroupSample& fit, const TuningPair& pair1,
                              const TuningPair& pair0, double u);

/// Legendre kernel of the given order, built once and shared.
const KernelSpec& legendre_kernel(int order);

}  // namespace binomix
