#include "binomix/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "binomix/densdiff.hpp"
#include "binomix/density.hpp"
#include "binomix/error.hpp"
#include "binomix/estimator.hpp"
#include "binomix/kernels.hpp"
#include "binomix/parallel.hpp"

namespace binomix {
namespace {

constexpr std::size_t kMaxAdjustments = 1'000'000;
constexpr double kBeta22AtHalf = 1.5;

double inverse_sum(const std::vector<std::int64_t>& t) {
  double s = 0.0;
  for (auto v : t) s += 1.0 / static_cast<double>(v);
  return s;
}

}  // namespace

HeteroData dgp_heterogeneous(std::size_t n, double target, rng::Engine& eng) {
  if (n < 2) throw std::invalid_argument("dgp needs n >= 2");
  if (!(target >= 5.0)) throw std::invalid_argument("target harmonic mean must be >= 5");
  HeteroData d;
  d.q.resize(n);
  for (double& q : d.q) q = rng::beta22(eng);

  std::poisson_distribution<std::int64_t> pois(target);
  d.trials.resize(n);
  for (auto& t : d.trials) {
    do t = pois(eng);
    while (t < 1);
  }
  d.t_min = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(0.2 * target)));
  d.trials[0] = d.t_min;

  // Move one t_j at a time halfway toward the value that would hit the target
  // exactly (at least one unit), until the harmonic mean is within 0.5.
  const double nd = static_cast<double>(n);
  const double want = nd / target;
  std::uniform_int_distribution<std::size_t> pick(1, n - 1);
  double inv = inverse_sum(d.trials);
  for (;;) {
    if (std::fabs(nd / inv - target) <= 0.5) {
      inv = inverse_sum(d.trials);
      if (std::fabs(nd / inv - target) <= 0.5) break;
    }
    if (d.adjustments >= kMaxAdjustments) {
      std::ostringstream msg;
      msg << "harmonic-mean adjustment did not converge: target " << target << ", reached "
          << nd / inv << " after " << d.adjustments << " steps";
      throw NumericalError(msg.str());
    }
    ++d.adjustments;
    const std::size_t j = pick(eng);
    const std::int64_t tj = d.trials[j];
    const double required = 1.0 / static_cast<double>(tj) + (want - inv);
    std::int64_t next;
    if (required <= 0.0) {
      next = 2 * tj;
    } else {
      const double star = 1.0 / required;
      const double step = 0.5 * (star - static_cast<double>(tj));
      std::int64_t move = static_cast<std::int64_t>(std::llround(step));
      if (move == 0) move = star > static_cast<double>(tj) ? 1 : -1;
      next = std::max<std::int64_t>(1, tj + move);
    }
    inv += 1.0 / static_cast<double>(next) - 1.0 / static_cast<double>(tj);
    d.trials[j] = next;
  }

  d.x.resize(n);
  d.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.x[i] = std::binomial_distribution<std::int64_t>(d.trials[i], d.q[i])(eng);
  }
  for (std::size_t i = 0; i < n; ++i) {
    d.y[i] = std::binomial_distribution<std::int64_t>(d.t_min, d.q[i])(eng);
  }
  return d;
}

MeanSe summarize(std::span<const double> values, double truth) {
  if (values.empty()) throw std::invalid_argument("nothing to summarize");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  MeanSe r;
  r.bias = mean - truth;
  r.se = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  return r;
}

std::vector<Sim1Row> run_sim1(const Sim1Config& cfg) {
  if (cfg.n < 2) throw std::invalid_argument("sim1 needs n >= 2");
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (cfg.targets.empty()) throw std::invalid_argument("no target harmonic means");
  for (double t : cfg.targets)
    if (!(t > 5.0)) throw std::invalid_argument("target harmonic means must exceed 5");
  const double h = cfg.h.value_or(std::pow(static_cast<double>(cfg.n), -0.2));
  detail::check_h_u(h, cfg.u);
  const KernelSpec k = KernelSpec::epanechnikov();
  const std::size_t R = static_cast<std::size_t>(cfg.replications);
  const std::size_t T = cfg.targets.size();
  std::vector<double> kde(T * R), clipped(T * R);
  parallel_for(
      T * R,
      [&](std::size_t task) {
        const std::size_t ti = task / R, r = task % R;
        auto eng = rng::stream(cfg.seed, {kSim1Stream, ti, r});
        const HeteroData d = dgp_heterogeneous(cfg.n, cfg.targets[ti], eng);
        const BinomialSample s(d.x, d.trials);
        kde[task] = kde_at(s, k, h, cfg.u);
        std::vector<double> yprop(d.y.size());
        for (std::size_t i = 0; i < d.y.size(); ++i)
          yprop[i] = static_cast<double>(d.y[i]) / static_cast<double>(d.t_min);
        clipped[task] = kde_points(yprop, k, h, cfg.u);
      },
      cfg.workers);
  const double truth = DensitySpec::beta(2, 2).pdf(cfg.u);
  std::vector<Sim1Row> rows;
  for (std::size_t ti = 0; ti < T; ++ti) {
    const auto a = summarize(std::span<const double>(kde.data() + ti * R, R), truth);
    const auto b = summarize(std::span<const double>(clipped.data() + ti * R, R), truth);
    rows.push_back({cfg.targets[ti], "kde", a.bias, a.se});
    rows.push_back({cfg.targets[ti], "clipped", b.bias, b.se});
  }
  return rows;
}

Sim2Draws run_sim2_draws(const Sim2Config& cfg, std::size_t n_index) {
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (cfg.h_grid.empty() || cfg.order_grid.empty())
    throw std::invalid_argument("tuning grids must be nonempty");
  const std::size_t n = cfg.n_list.at(n_index);
  if (n < 4) throw std::invalid_argument("sim2 needs n >= 4");
  const auto grid = tuning_grid(cfg.h_grid, cfg.order_grid);
  const std::size_t R = static_cast<std::size_t>(cfg.replications);
  Sim2Draws out;
  out.joint.resize(R);
  out.separate.resize(R);
  parallel_for(
      R,
      [&](std::size_t r) {
        auto eng = rng::stream(cfg.seed, {kSim2Stream, n_index, r});
        std::bernoulli_distribution coin(0.5);
        std::vector<double> q(n);
        std::vector<int> a(n);
        for (std::size_t i = 0; i < n; ++i) {
          a[i] = coin(eng) ? 1 : 0;
          q[i] = sample_nonsmooth(eng);
        }
        const auto s = TwoGroupSample::from_proportions(std::move(q), std::move(a));
        const std::uint64_t fold_seed = rng::derive_seed(cfg.seed, {kSim2Stream, n_index, r, 1});
        const auto joint = select_tuning_joint(s, grid, fold_seed, cfg.eps, 1);
        const auto fit = s.subset(joint.folds.fit);
        out.joint[r] = diff_estimate(fit, joint.selected, cfg.u);
        const auto sep = select_tuning_separate(s, grid, fold_seed, cfg.eps, 1);
        out.separate[r] = diff_estimate_separate(fit, sep.group1, sep.group0, cfg.u);
      },
      cfg.workers);
  return out;
}

std::vector<Sim2Row> run_sim2(const Sim2Config& cfg) {
  if (cfg.n_list.empty()) throw std::invalid_argument("no sample sizes");
  std::vector<Sim2Row> rows;
  for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
    const auto d = run_sim2_draws(cfg, ni);
    const auto j = summarize(d.joint, 0.0);
    const auto s = summarize(d.separate, 0.0);
    rows.push_back({cfg.n_list[ni], "joint", j.bias, j.se});
    rows.push_back({cfg.n_list[ni], "separate", s.bias, s.se});
  }
  return rows;
}

bool undersmoothing_window(double zeta, double gamma, double s) {
  return zeta > std::max(1.0 / (2.0 * s + 1.0), 1.0 - gamma) && zeta < 2.0 * gamma - 1.0;
}

CoverageResult run_coverage(const CoverageConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (cfg.n < 2) throw std::invalid_argument("coverage needs n >= 2");
  if (cfg.t < 1) throw std::invalid_argument("trials must be >= 1");
  detail::check_h_u(cfg.h, cfg.u);
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  const KernelSpec k = KernelSpec::epanechnikov();
  const double truth = DensitySpec::beta(2, 2).pdf(cfg.u);
  const std::size_t R = static_cast<std::size_t>(cfg.replications);
  std::vector<char> hit(R, 0);
  parallel_for(
      R,
      [&](std::size_t r) {
        auto eng = rng::stream(cfg.seed, {kCoverageStream, r});
        std::vector<std::int64_t> x(cfg.n), t(cfg.n, cfg.t);
        for (auto& xi : x) {
          const double q = rng::beta22(eng);
          xi = std::binomial_distribution<std::int64_t>(cfg.t, q)(eng);
        }
        const auto ci = confidence_interval(BinomialSample(x, t), k, cfg.h, cfg.u, cfg.alpha);
        hit[r] = ci.ci_lo <= truth && truth <= ci.ci_hi;
      },
      cfg.workers);
  CoverageResult res;
  res.replications = R;
  for (char c : hit) res.covered += c != 0;
  res.coverage = static_cast<double>(res.covered) / static_cast<double>(R);
  const double ln = std::log(static_cast<double>(cfg.n));
  res.zeta = -std::log(cfg.h) / ln;
  res.gamma = std::log(static_cast<double>(cfg.t)) / ln;
  res.in_window = undersmoothing_window(res.zeta, res.gamma, cfg.s);
  return res;
}

}  // namespace binomix
