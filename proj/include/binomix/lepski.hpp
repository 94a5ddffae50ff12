#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binomix/kernels.hpp"
#include "binomix/sample.hpp"

namespace binomix {

/// Candidate bandwidths, strictly decreasing.
class BandwidthGrid {
 public:
  /// Sorts descending; rejects duplicates and non-positive values.
  static BandwidthGrid from_values(std::vector<double> values);
  /// start, start*ratio, ..., count values (0 < ratio < 1).
  static BandwidthGrid geometric(double start, double ratio, int count);
  /// "0.5,0.4,0.3" or "geom:start:ratio:count".
  static BandwidthGrid parse(const std::string& text);
  static BandwidthGrid defaults() { return geometric(0.5, 0.9, 20); }

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

struct LepskiConfig {
  double alpha = 0.05;
  int bootstrap_reps = 1000;
  std::uint64_t seed = 0;
  double u = 0.5;
  unsigned workers = 0;  // 0: default worker count
};

struct LepskiStep {
  double h = 0.0;
  double estimate = 0.0;
  double statistic = 0.0;
  double critical = 0.0;
  bool rejected = false;
};

struct LepskiResult {
  double h = 0.0;
  std::size_t index = 0;
  /// Every bandwidth with a nonempty comparison set was rejected, so the
  /// smallest grid value is returned.
  bool all_rejected = false;
  /// Grid index of the first rejection in the scan, or -1.
  long first_rejection = -1;
  std::vector<LepskiStep> trace;
};

/// 1/(n(n-1)) sum_i [{K_h'(p_i) - K_h(p_i)} - {p_hat_h' - p_hat_h}]^2.
double pairwise_variance(const BinomialSample& s, const KernelSpec& k, double h, double h_prime,
                         double u);

/// Standard-normal multipliers of bootstrap draw `draw`.
std::vector<double> bootstrap_multipliers(std::uint64_t seed, std::size_t draw, std::size_t n);

/// (1 - alpha) empirical quantile of max_{h' < h} |sum_i e_i Z_i(h, h')| / (n sqrt(pairwise var)).
double bootstrap_critical_value(const BinomialSample& s, const KernelSpec& k, double h,
                                const BandwidthGrid& grid, const LepskiConfig& cfg);

/// Scans the grid from the largest bandwidth down and returns the first one
/// whose test is not rejected. The smallest bandwidth has nothing to compare
/// against and is never rejected.
LepskiResult lepski_select(const BinomialSample& s, const KernelSpec& k, const BandwidthGrid& grid,
                           const LepskiConfig& cfg);

/// Index ceil(level * count) - 1 of the sorted values (type-1 quantile).
double empirical_quantile(std::vector<double> values, double level);

}  // namespace binomix
