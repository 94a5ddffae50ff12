#include "binomix/lepski.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>

#include "binomix/error.hpp"
#include "binomix/parallel.hpp"
#include "binomix/rng.hpp"
#include "binomix/simd.hpp"

namespace binomix {
namespace {

constexpr std::uint64_t kBootstrapTag = 0x4c45505349ULL;

// Mean taken as a shift from the first value, exact for constant input.
double shifted_mean(std::span<const double> v) {
  double shift = 0.0;
  for (double x : v) shift += x - v[0];
  return v[0] + shift / static_cast<double>(v.size());
}

void check_config(const LepskiConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (cfg.bootstrap_reps < 1) throw std::invalid_argument("bootstrap_reps must be >= 1");
  if (!(cfg.u > 0.0 && cfg.u < 1.0))
    throw std::invalid_argument("evaluation point must lie in (0, 1)");
}

// K_h(p_i) for every grid bandwidth, plus the estimates and pairwise variances.
struct Precomputed {
  std::size_t n = 0;
  std::vector<std::vector<double>> kh;  // [j][i]
  std::vector<double> est;              // p_hat_{h_j}
  std::vector<std::vector<double>> var; // [j][k], symmetric
};

Precomputed precompute(const BinomialSample& s, const KernelSpec& k, const BandwidthGrid& grid,
                       double u) {
  Precomputed pc;
  pc.n = s.size();
  const std::size_t J = grid.size();
  pc.kh.assign(J, std::vector<double>(pc.n));
  pc.est.assign(J, 0.0);
  for (std::size_t j = 0; j < J; ++j) {
    const double h = grid[j];
    simd::kernel_eval(s.proportions(), k.even_coefficients(), u, 1.0 / h, pc.kh[j]);
    double sum = 0.0;
    for (double& v : pc.kh[j]) {
      v /= h;
      sum += v;
    }
    pc.est[j] = sum / static_cast<double>(pc.n);
  }
  pc.var.assign(J, std::vector<double>(J, 0.0));
  std::vector<double> diff(pc.n);
  const double denom = static_cast<double>(pc.n) * static_cast<double>(pc.n - 1);
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t m = j + 1; m < J; ++m) {
      for (std::size_t i = 0; i < pc.n; ++i) diff[i] = pc.kh[m][i] - pc.kh[j][i];
      const double v = simd::sum_sq_dev(diff, shifted_mean(diff)) / denom;
      pc.var[j][m] = pc.var[m][j] = v;
    }
  }
  return pc;
}

// Bootstrap maxima T[j][b] for every grid index j with a nonempty comparison set.
std::vector<std::vector<double>> bootstrap_maxima(const Precomputed& pc, const LepskiConfig& cfg) {
  const std::size_t J = pc.kh.size(), B = static_cast<std::size_t>(cfg.bootstrap_reps);
  std::vector<std::vector<double>> T(J, std::vector<double>(B, 0.0));
  const double nd = static_cast<double>(pc.n);
  parallel_for(
      B,
      [&](std::size_t b) {
        const auto e = bootstrap_multipliers(cfg.seed, b, pc.n);
        double sum_e = 0.0;
        for (double v : e) sum_e += v;
        std::vector<double> S(J);
        for (std::size_t j = 0; j < J; ++j) S[j] = simd::dot(e, pc.kh[j]);
        for (std::size_t j = 0; j < J; ++j) {
          double best = 0.0;
          for (std::size_t m = j + 1; m < J; ++m) {
            const double v = pc.var[j][m];
            if (!(v > 0.0)) continue;
            const double z = S[m] - S[j] - (pc.est[m] - pc.est[j]) * sum_e;
            best = std::max(best, std::fabs(z) / (nd * std::sqrt(v)));
          }
          T[j][b] = best;
        }
      },
      cfg.workers);
  return T;
}

std::size_t grid_index(const BandwidthGrid& grid, double h) {
  for (std::size_t j = 0; j < grid.size(); ++j)
    if (grid[j] == h) return j;
  throw std::invalid_argument("bandwidth is not an element of the grid");
}

}  // namespace

BandwidthGrid BandwidthGrid::from_values(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("bandwidth grid is empty");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("bandwidths must be positive and finite");
  std::sort(values.begin(), values.end(), std::greater<>());
  if (std::adjacent_find(values.begin(), values.end()) != values.end())
    throw std::invalid_argument("bandwidth grid has duplicate values");
  BandwidthGrid g;
  g.values_ = std::move(values);
  return g;
}

BandwidthGrid BandwidthGrid::geometric(double start, double ratio, int count) {
  if (!(start > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count < 1)
    throw std::invalid_argument("geometric grid needs start > 0, 0 < ratio < 1, count >= 1");
  std::vector<double> v;
  double h = start;
  for (int i = 0; i < count; ++i, h *= ratio) v.push_back(h);
  return from_values(std::move(v));
}

BandwidthGrid BandwidthGrid::parse(const std::string& text) {
  auto to_double = [&](const std::string& tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size())
      throw std::invalid_argument("bad number '" + tok + "' in bandwidth grid");
    return v;
  };
  std::vector<std::string> parts;
  if (text.rfind("geom:", 0) == 0) {
    std::stringstream ss(text.substr(5));
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 3) throw std::invalid_argument("expected geom:start:ratio:count");
    const double count = to_double(parts[2]);
    if (count != std::floor(count)) throw std::invalid_argument("geometric count must be an integer");
    return geometric(to_double(parts[0]), to_double(parts[1]), static_cast<int>(count));
  }
  std::stringstream ss(text);
  std::string tok;
  std::vector<double> v;
  while (std::getline(ss, tok, ',')) v.push_back(to_double(tok));
  return from_values(std::move(v));
}

double pairwise_variance(const BinomialSample& s, const KernelSpec& k, double h, double h_prime,
                         double u) {
  if (!(h > 0.0) || !(h_prime > 0.0)) throw std::invalid_argument("bandwidths must be positive");
  if (h == h_prime) throw std::invalid_argument("pairwise variance needs two distinct bandwidths");
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("evaluation point must lie in (0, 1)");
  const std::size_t n = s.size();
  if (n < 2) throw DataError("pairwise variance needs at least 2 records");
  std::vector<double> a(n), b(n);
  simd::kernel_eval(s.proportions(), k.even_coefficients(), u, 1.0 / h, a);
  simd::kernel_eval(s.proportions(), k.even_coefficients(), u, 1.0 / h_prime, b);
  for (std::size_t i = 0; i < n; ++i) a[i] = b[i] / h_prime - a[i] / h;
  return simd::sum_sq_dev(a, shifted_mean(a)) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

std::vector<double> bootstrap_multipliers(std::uint64_t seed, std::size_t draw, std::size_t n) {
  auto eng = rng::stream(seed, {kBootstrapTag, draw});
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> e(n);
  for (double& v : e) v = normal(eng);
  return e;
}

double empirical_quantile(std::vector<double> values, double level) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = std::ceil(level * static_cast<double>(values.size()));
  const std::size_t idx = pos < 1.0 ? 0 : static_cast<std::size_t>(pos) - 1;
  return values[std::min(idx, values.size() - 1)];
}

double bootstrap_critical_value(const BinomialSample& s, const KernelSpec& k, double h,
                                const BandwidthGrid& grid, const LepskiConfig& cfg) {
  check_config(cfg);
  if (s.size() < 2) throw DataError("bootstrap needs at least 2 records");
  const std::size_t j = grid_index(grid, h);
  if (j + 1 >= grid.size())
    throw std::invalid_argument("no smaller bandwidth in the grid to compare against");
  const auto pc = precompute(s, k, grid, cfg.u);
  const auto T = bootstrap_maxima(pc, cfg);
  return empirical_quantile(T[j], 1.0 - cfg.alpha);
}

LepskiResult lepski_select(const BinomialSample& s, const KernelSpec& k, const BandwidthGrid& grid,
                           const LepskiConfig& cfg) {
  check_config(cfg);
  if (grid.size() == 0) throw std::invalid_argument("bandwidth grid is empty");
  if (s.size() < 2) throw DataError("bandwidth selection needs at least 2 records");
  const std::size_t J = grid.size();
  const auto pc = precompute(s, k, grid, cfg.u);
  std::vector<std::vector<double>> T;
  if (J > 1) T = bootstrap_maxima(pc, cfg);

  LepskiResult res;
  res.trace.resize(J);
  bool selected = false;
  for (std::size_t j = 0; j < J; ++j) {
    LepskiStep& st = res.trace[j];
    st.h = grid[j];
    st.estimate = pc.est[j];
    if (j + 1 < J) {
      for (std::size_t m = j + 1; m < J; ++m) {
        const double v = pc.var[j][m];
        if (!(v > 0.0)) continue;
        st.statistic = std::max(st.statistic, std::fabs(pc.est[m] - pc.est[j]) / std::sqrt(v));
      }
      st.critical = empirical_quantile(T[j], 1.0 - cfg.alpha);
      st.rejected = st.statistic > 1.0 + st.critical;
    }
    if (st.rejected && res.first_rejection < 0) res.first_rejection = static_cast<long>(j);
    if (!st.rejected && !selected) {
      selected = true;
      res.index = j;
      res.h = grid[j];
    }
  }
  res.all_rejected = J > 1 && res.index == J - 1;
  return res;
}

}  // namespace binomix
