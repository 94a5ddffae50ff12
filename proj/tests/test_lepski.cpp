#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "binomix/error.hpp"
#include "binomix/lepski.hpp"
#include "binomix/rng.hpp"
#include "binomix/simlab.hpp"

using namespace binomix;

namespace {

BinomialSample simulated(std::size_t n, double target, std::uint64_t seed) {
  auto eng = rng::stream(seed, {77});
  const auto d = dgp_heterogeneous(n, target, eng);
  return BinomialSample(d.x, d.trials);
}

BandwidthGrid tenths() {
  return BandwidthGrid::from_values({0.5, 0.45, 0.4, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1, 0.05});
}

// Independent recomputation with scalar kernel calls and explicit centering.
struct Brute {
  std::vector<double> stat, crit;
  std::size_t selected = 0;
};

Brute brute_force(const BinomialSample& s, const KernelSpec& k, const BandwidthGrid& g,
                  const LepskiConfig& cfg) {
  const std::size_t n = s.size(), J = g.size();
  std::vector<std::vector<double>> kh(J, std::vector<double>(n));
  std::vector<double> est(J, 0.0);
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      kh[j][i] = k((s.proportions()[i] - cfg.u) / g[j]) / g[j];
      est[j] += kh[j][i] / n;
    }
  }
  auto z_of = [&](std::size_t j, std::size_t m) {
    std::vector<double> z(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += (kh[m][i] - kh[j][i]) / n;
    for (std::size_t i = 0; i < n; ++i) z[i] = kh[m][i] - kh[j][i] - mean;
    return z;
  };
  auto var_of = [&](std::size_t j, std::size_t m) {
    double ss = 0.0;
    for (double v : z_of(j, m)) ss += v * v;
    return ss / (double(n) * double(n - 1));
  };
  Brute out;
  out.stat.assign(J, 0.0);
  out.crit.assign(J, 0.0);
  std::vector<std::vector<double>> draws(J);
  for (int b = 0; b < cfg.bootstrap_reps; ++b) {
    const auto e = bootstrap_multipliers(cfg.seed, b, n);
    for (std::size_t j = 0; j + 1 < J; ++j) {
      double best = 0.0;
      for (std::size_t m = j + 1; m < J; ++m) {
        const double v = var_of(j, m);
        if (v <= 0.0) continue;
        const auto z = z_of(j, m);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += e[i] * z[i];
        best = std::max(best, std::fabs(acc) / (n * std::sqrt(v)));
      }
      draws[j].push_back(best);
    }
  }
  bool chosen = false;
  for (std::size_t j = 0; j < J; ++j) {
    bool rejected = false;
    if (j + 1 < J) {
      for (std::size_t m = j + 1; m < J; ++m) {
        const double v = var_of(j, m);
        if (v <= 0.0) continue;
        out.stat[j] = std::max(out.stat[j], std::fabs(est[m] - est[j]) / std::sqrt(v));
      }
      auto d = draws[j];
      std::sort(d.begin(), d.end());
      const std::size_t idx =
          static_cast<std::size_t>(std::ceil((1.0 - cfg.alpha) * d.size())) - 1;
      out.crit[j] = d[idx];
      rejected = out.stat[j] > 1.0 + out.crit[j];
    }
    if (!rejected && !chosen) {
      chosen = true;
      out.selected = j;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("grid construction") {
  const auto g = BandwidthGrid::parse("0.1,0.5,0.3");
  REQUIRE(g.size() == 3);
  CHECK(g[0] == 0.5);
  CHECK(g[2] == 0.1);
  CHECK_THROWS_AS(BandwidthGrid::parse("0.1,0.1"), std::invalid_argument);
  CHECK_THROWS_AS(BandwidthGrid::parse("0.1,-0.2"), std::invalid_argument);
  CHECK_THROWS_AS(BandwidthGrid::parse("0.1,abc"), std::invalid_argument);
  CHECK_THROWS_AS(BandwidthGrid::parse(""), std::invalid_argument);
  const auto geo = BandwidthGrid::parse("geom:0.5:0.5:3");
  CHECK(geo.values() == std::vector<double>{0.5, 0.25, 0.125});
  CHECK(BandwidthGrid::defaults().size() == 20);
}

TEST_CASE("pairwise variance: preconditions and degenerate cases") {
  const auto k = KernelSpec::epanechnikov();
  const BinomialSample s({1, 2, 3}, {10, 10, 10});
  CHECK_THROWS_AS(pairwise_variance(s, k, 0.2, 0.2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(pairwise_variance(BinomialSample({1}, {2}), k, 0.2, 0.3, 0.5), DataError);
  // identical proportions: the kernel difference is the same for every record
  const BinomialSample same({3, 6, 9}, {10, 20, 30});
  CHECK(pairwise_variance(same, k, 0.2, 0.3, 0.5) == 0.0);
  // every point outside both windows
  CHECK(pairwise_variance(s, k, 0.05, 0.1, 0.9) == 0.0);
}

TEST_CASE("pairwise variance matches a two-pass recomputation") {
  const auto s = simulated(300, 60, 1);
  const auto k = KernelSpec::legendre(4);
  for (auto [h, hp] : {std::pair{0.3, 0.1}, {0.5, 0.2}, {0.12, 0.4}}) {
    const std::size_t n = s.size();
    std::vector<double> d(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = s.proportions()[i];
      d[i] = k((p - 0.5) / hp) / hp - k((p - 0.5) / h) / h;
      mean += d[i];
    }
    mean /= n;
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    const double ref = ss / (double(n) * double(n - 1));
    CHECK(std::fabs(pairwise_variance(s, k, h, hp, 0.5) - ref) <= 1e-12 * ref);
    CHECK(pairwise_variance(s, k, h, hp, 0.5) == doctest::Approx(pairwise_variance(s, k, hp, h, 0.5)).epsilon(1e-13));
  }
}

TEST_CASE("critical value: determinism, alpha monotonicity, minimum at high alpha") {
  const auto s = simulated(200, 100, 2);
  const auto k = KernelSpec::epanechnikov();
  const auto g = tenths();
  LepskiConfig cfg;
  cfg.seed = 99;
  cfg.bootstrap_reps = 500;
  const double c1 = bootstrap_critical_value(s, k, 0.3, g, cfg);
  const double c2 = bootstrap_critical_value(s, k, 0.3, g, cfg);
  CHECK(c1 == c2);
  CHECK(c1 > 0.0);
  double prev = 1e300;
  for (double a : {0.01, 0.05, 0.1, 0.3, 0.5, 0.9, 0.999}) {
    cfg.alpha = a;
    const double c = bootstrap_critical_value(s, k, 0.3, g, cfg);
    CHECK(c <= prev);
    CHECK(c >= 0.0);
    prev = c;
  }
  CHECK_THROWS_AS(bootstrap_critical_value(s, k, 0.05, g, cfg), std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_critical_value(s, k, 0.33, g, cfg), std::invalid_argument);
}

TEST_CASE("critical value is zero when every contrast vanishes") {
  const BinomialSample s({1, 2, 3}, {10, 10, 10});
  const auto g = BandwidthGrid::from_values({0.1, 0.05});
  LepskiConfig cfg;
  cfg.u = 0.8;
  CHECK(bootstrap_critical_value(s, KernelSpec::epanechnikov(), 0.1, g, cfg) == 0.0);
}

TEST_CASE("critical value is stable under ten times more replications") {
  const auto s = simulated(200, 100, 3);
  const auto k = KernelSpec::epanechnikov();
  const auto g = tenths();
  LepskiConfig cfg;
  cfg.seed = 5;
  cfg.bootstrap_reps = 2000;
  const double c = bootstrap_critical_value(s, k, 0.5, g, cfg);
  cfg.bootstrap_reps = 20000;
  cfg.seed = 6;
  const double big = bootstrap_critical_value(s, k, 0.5, g, cfg);
  CHECK(std::fabs(c - big) <= 0.1 * big);
}

TEST_CASE("singleton grid selects its only value") {
  const auto s = simulated(50, 30, 4);
  const auto r = lepski_select(s, KernelSpec::epanechnikov(), BandwidthGrid::from_values({0.3}), {});
  CHECK(r.h == 0.3);
  CHECK(r.index == 0);
  CHECK_FALSE(r.all_rejected);
  CHECK(r.first_rejection == -1);
  REQUIRE(r.trace.size() == 1);
  CHECK_FALSE(r.trace[0].rejected);
}

TEST_CASE("identical estimates across the grid: no rejection, largest bandwidth kept") {
  // all proportions outside every window, so every estimate is 0
  const BinomialSample s({1, 1, 2, 0}, {10, 20, 10, 5});
  const auto g = BandwidthGrid::from_values({0.2, 0.15, 0.1});
  LepskiConfig cfg;
  cfg.u = 0.7;
  const auto r = lepski_select(s, KernelSpec::legendre(4), g, cfg);
  CHECK(r.index == 0);
  CHECK(r.h == 0.2);
  for (const auto& st : r.trace) {
    CHECK(st.statistic == 0.0);
    CHECK_FALSE(st.rejected);
  }
}

TEST_CASE("selection agrees with an independent brute-force recomputation") {
  const auto k = KernelSpec::epanechnikov();
  const auto g = tenths();
  for (std::uint64_t seed = 10; seed < 16; ++seed) {
    CAPTURE(seed);
    const auto s = simulated(200, 100, seed);
    LepskiConfig cfg;
    cfg.seed = seed * 3;
    cfg.bootstrap_reps = 300;
    const auto r = lepski_select(s, k, g, cfg);
    const auto b = brute_force(s, k, g, cfg);
    CHECK(r.index == b.selected);
    for (std::size_t j = 0; j < g.size(); ++j) {
      CHECK(r.trace[j].statistic == doctest::Approx(b.stat[j]).epsilon(1e-9));
      CHECK(r.trace[j].critical == doctest::Approx(b.crit[j]).epsilon(1e-9));
    }
  }
}

TEST_CASE("determinism across worker counts") {
  const auto s = simulated(300, 80, 20);
  const auto k = KernelSpec::legendre(4);
  LepskiConfig cfg;
  cfg.seed = 123;
  cfg.workers = 1;
  const auto a = lepski_select(s, k, BandwidthGrid::defaults(), cfg);
  cfg.workers = 4;
  const auto b = lepski_select(s, k, BandwidthGrid::defaults(), cfg);
  CHECK(a.index == b.index);
  for (std::size_t j = 0; j < a.trace.size(); ++j) {
    CHECK(a.trace[j].statistic == b.trace[j].statistic);
    CHECK(a.trace[j].critical == b.trace[j].critical);
  }
}

TEST_CASE("property: selection is a grid element and the trace is complete") {
  const auto k = KernelSpec::epanechnikov();
  for (std::uint64_t seed = 30; seed < 45; ++seed) {
    const auto s = simulated(100 + 10 * (seed % 7), 20 + 5 * (seed % 9), seed);
    const auto g = BandwidthGrid::geometric(0.6, 0.8, 1 + static_cast<int>(seed % 12));
    LepskiConfig cfg;
    cfg.seed = seed;
    cfg.bootstrap_reps = 200;
    const auto r = lepski_select(s, k, g, cfg);
    CHECK(std::find(g.values().begin(), g.values().end(), r.h) != g.values().end());
    CHECK(r.trace.size() == g.size());
    CHECK(g[r.index] == r.h);
    CHECK_FALSE(r.trace[r.index].rejected);
    for (std::size_t j = 0; j < r.index; ++j) CHECK(r.trace[j].rejected);
    CHECK(r.all_rejected == (g.size() > 1 && r.index == g.size() - 1));
  }
}

TEST_CASE("empirical quantile") {
  std::vector<double> v{5, 1, 4, 2, 3};
  CHECK(empirical_quantile(v, 0.95) == 5);
  CHECK(empirical_quantile(v, 0.2) == 1);
  CHECK(empirical_quantile(v, 0.21) == 2);
  CHECK(empirical_quantile(v, 0.0) == 1);
  CHECK_THROWS_AS(empirical_quantile({}, 0.5), std::invalid_argument);
}
