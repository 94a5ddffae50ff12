#include "binomix/sample.hpp"

#include <string>

#include "binomix/error.hpp"

namespace binomix {

BinomialSample::BinomialSample(std::vector<std::int64_t> successes,
                               std::vector<std::int64_t> trials, std::vector<int> groups)
    : x_(std::move(successes)), t_(std::move(trials)), groups_(std::move(groups)) {
  if (x_.size() != t_.size())
    throw DataError("successes and trials differ in length");
  if (!groups_.empty() && groups_.size() != x_.size())
    throw DataError("group column differs in length from the counts");
  props_.resize(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (t_[i] < 1) throw DataError("record " + std::to_string(i) + ": trials must be >= 1");
    if (x_[i] < 0 || x_[i] > t_[i])
      throw DataError("record " + std::to_string(i) + ": successes must lie in [0, trials]");
    if (!groups_.empty() && groups_[i] != 0 && groups_[i] != 1)
      throw DataError("record " + std::to_string(i) + ": group must be 0 or 1");
    props_[i] = static_cast<double>(x_[i]) / static_cast<double>(t_[i]);
  }
}

TwoGroupSample TwoGroupSample::from_proportions(std::vector<double> values,
                                                std::vector<int> groups) {
  if (values.size() != groups.size()) throw DataError("values and groups differ in length");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0))
      throw DataError("record " + std::to_string(i) + ": value must lie in [0, 1]");
    if (groups[i] != 0 && groups[i] != 1)
      throw DataError("record " + std::to_string(i) + ": group must be 0 or 1");
  }
  TwoGroupSample s;
  s.values_ = std::move(values);
  s.groups_ = std::move(groups);
  return s;
}

TwoGroupSample TwoGroupSample::from_binomial(const BinomialSample& sample) {
  if (!sample.has_groups()) throw DataError("two-group estimation needs a group column");
  TwoGroupSample s;
  s.values_.assign(sample.proportions().begin(), sample.proportions().end());
  s.groups_.assign(sample.groups().begin(), sample.groups().end());
  s.binomial_ = true;
  return s;
}

double TwoGroupSample::abar() const {
  if (groups_.empty()) return 0.0;
  return static_cast<double>(group_size(1)) / static_cast<double>(groups_.size());
}

std::size_t TwoGroupSample::group_size(int a) const {
  std::size_t c = 0;
  for (int g : groups_) c += g == a;
  return c;
}

TwoGroupSample TwoGroupSample::subset(std::span<const std::size_t> index) const {
  TwoGroupSample s;
  s.binomial_ = binomial_;
  s.values_.reserve(index.size());
  s.groups_.reserve(index.size());
  for (std::size_t i : index) {
    s.values_.push_back(values_.at(i));
    s.groups_.push_back(groups_.at(i));
  }
  return s;
}

void check_positivity(const TwoGroupSample& s, double eps) {
  if (s.size() == 0) throw DataError("no records");
  const double a = s.abar();
  if (s.group_size(0) == 0 || s.group_size(1) == 0 || a < eps || a > 1.0 - eps)
    throw DataError("positivity violated: group-1 share " + std::to_string(a) +
                    " outside [" + std::to_string(eps) + ", " + std::to_string(1.0 - eps) + "]");
}

}  // namespace binomix
