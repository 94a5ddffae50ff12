#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace binomix {

/// Observed binomial counts (x_i successes out of t_i trials), optionally with a
/// binary group label per record. Validated on construction; throws DataError.
class BinomialSample {
 public:
  BinomialSample() = default;
  BinomialSample(std::vector<std::int64_t> successes, std::vector<std::int64_t> trials,
                 std::vector<int> groups = {});

  std::size_t size() const { return x_.size(); }
  bool empty() const { return x_.empty(); }
  bool has_groups() const { return !groups_.empty(); }

  std::span<const std::int64_t> successes() const { return x_; }
  std::span<const std::int64_t> trials() const { return t_; }
  std::span<const int> groups() const { return groups_; }
  /// x_i / t_i in record order.
  std::span<const double> proportions() const { return props_; }

 private:
  std::vector<std::int64_t> x_;
  std::vector<std::int64_t> t_;
  std::vector<int> groups_;
  std::vector<double> props_;
};

/// Two-group data: either true proportions Q_i in [0, 1] or binomial counts,
/// with a group label A_i in {0, 1} per record. Group 1 is the minuend of the
/// difference p_1 - p_0.
class TwoGroupSample {
 public:
  static TwoGroupSample from_proportions(std::vector<double> values, std::vector<int> groups);
  static TwoGroupSample from_binomial(const BinomialSample& sample);

  std::size_t size() const { return values_.size(); }
  bool binomial() const { return binomial_; }
  /// Q_i, or x_i / t_i in binomial mode.
  std::span<const double> values() const { return values_; }
  std::span<const int> groups() const { return groups_; }
  double abar() const;
  std::size_t group_size(int a) const;

  /// Subsample in the given index order.
  TwoGroupSample subset(std::span<const std::size_t> index) const;

 private:
  std::vector<double> values_;
  std::vector<int> groups_;
  bool binomial_ = false;
};

/// Throws DataError unless eps <= abar <= 1 - eps and both groups are present.
void check_positivity(const TwoGroupSample& s, double eps);

}  // namespace binomix
