#include "binomix/density.hpp"

#include <algorithm>
#include <boost/math/distributions/beta.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace binomix {
namespace {

double poly(const std::vector<double>& c, double u) {
  double p = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) p = p * u + c[k];
  return p;
}

double poly_derivative(const std::vector<double>& c, double u) {
  double d = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) d = d * u + static_cast<double>(k) * c[k];
  return d;
}

// int_lo^u of the polynomial
double poly_integral(const std::vector<double>& c, double lo, double u) {
  double a = 0.0, b = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) {
    a = a * lo + c[k] / static_cast<double>(k + 1);
    b = b * u + c[k] / static_cast<double>(k + 1);
  }
  return b * u - a * lo;
}

bool is_integer(double v) { return v == std::floor(v) && v >= 1.0 && v <= 64.0; }

// u^(a-1) (1-u)^(b-1) / B(a, b) expanded in monomials.
std::vector<double> beta_polynomial(int a, int b) {
  std::vector<double> c(a + b - 1, 0.0);
  double binom = 1.0;  // C(b-1, j)
  for (int j = 0; j <= b - 1; ++j) {
    c[a - 1 + j] = (j % 2 == 0 ? 1.0 : -1.0) * binom;
    binom = binom * (b - 1 - j) / (j + 1);
  }
  const double inv_beta = 1.0 / boost::math::beta(static_cast<double>(a), static_cast<double>(b));
  for (double& v : c) v *= inv_beta;
  return c;
}

}  // namespace

DensitySpec DensitySpec::beta(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("beta parameters must be positive");
  DensitySpec d;
  d.form_ = DensityForm::beta;
  d.a_ = a;
  d.b_ = b;
  auto fmt = [](double v) {
    return v == std::floor(v) ? std::to_string(static_cast<long long>(v)) : std::to_string(v);
  };
  d.name_ = "beta:" + fmt(a) + "," + fmt(b);
  if (d.integer_beta()) {
    d.pieces_.push_back({0.0, 1.0, beta_polynomial(static_cast<int>(a), static_cast<int>(b))});
    d.piece_mass_ = {1.0};
  }
  if (a == 2.0 && b == 2.0) {
    d.smooth_ = {6.0, 1.0, 1.5, 2.0};
  } else if (a == 1.0 && b == 1.0) {
    d.smooth_ = {0.0, 1.0, 1.0, 2.0};
  } else {
    d.smooth_ = d.grid_smoothness();
    d.smooth_.s = 2.0;
  }
  return d;
}

DensitySpec DensitySpec::uniform() {
  DensitySpec d = beta(1.0, 1.0);
  d.name_ = "uniform";
  return d;
}

DensitySpec DensitySpec::piecewise(std::vector<PolyPiece> pieces, std::string name) {
  if (pieces.empty()) throw std::invalid_argument("piecewise density needs at least one piece");
  double prev = 0.0;
  for (const auto& p : pieces) {
    if (p.lo != prev || !(p.hi > p.lo) || p.coeffs.empty())
      throw std::invalid_argument("pieces must tile [0, 1] in order");
    prev = p.hi;
  }
  if (prev != 1.0) throw std::invalid_argument("pieces must end at 1");
  double total = 0.0;
  for (const auto& p : pieces) total += poly_integral(p.coeffs, p.lo, p.hi);
  if (!(total > 0.0)) throw std::invalid_argument("piecewise density has no mass");
  DensitySpec d;
  d.form_ = DensityForm::piecewise;
  d.name_ = std::move(name);
  d.raw_norm_ = total;
  double cum = 0.0;
  for (auto& p : pieces) {
    for (double& c : p.coeffs) c /= total;
    cum += poly_integral(p.coeffs, p.lo, p.hi);
    d.piece_mass_.push_back(cum);
  }
  d.piece_mass_.back() = 1.0;
  d.pieces_ = std::move(pieces);
  d.smooth_ = d.grid_smoothness();
  return d;
}

DensitySpec DensitySpec::nonsmooth_example() {
  return piecewise({{0.0, 0.25, {0.0, 2.0, 2.0}},
                    {0.25, 0.5, {0.0, 1.0}},
                    {0.5, 0.75, {0.2, 2.0, -1.0}},
                    {0.75, 1.0, {-1.0, 1.5}}},
                   "nonsmooth");
}

DensitySpec DensitySpec::parse(const std::string& text) {
  if (text == "uniform") return uniform();
  if (text == "nonsmooth") return nonsmooth_example();
  if (text.rfind("beta:", 0) == 0) {
    const auto comma = text.find(',', 5);
    if (comma == std::string::npos) throw std::invalid_argument("expected beta:a,b");
    std::size_t used_a = 0, used_b = 0;
    const std::string sa = text.substr(5, comma - 5), sb = text.substr(comma + 1);
    double a = 0.0, b = 0.0;
    try {
      a = std::stod(sa, &used_a);
      b = std::stod(sb, &used_b);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad beta parameters in '" + text + "'");
    }
    if (used_a != sa.size() || used_b != sb.size())
      throw std::invalid_argument("bad beta parameters in '" + text + "'");
    return beta(a, b);
  }
  throw std::invalid_argument("unknown density '" + text + "' (beta:a,b | uniform | nonsmooth)");
}

bool DensitySpec::integer_beta() const {
  return form_ == DensityForm::beta && is_integer(a_) && is_integer(b_);
}

std::vector<double> DensitySpec::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) out.push_back(pieces_[i].hi);
  return out;
}

int DensitySpec::piece_index(double u) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (u <= pieces_[i].hi) return static_cast<int>(i);
  return static_cast<int>(pieces_.size()) - 1;
}

double DensitySpec::pdf(double u) const {
  if (u < 0.0 || u > 1.0) return 0.0;
  if (!pieces_.empty()) return poly(pieces_[piece_index(u)].coeffs, u);
  return boost::math::pdf(boost::math::beta_distribution<double>(a_, b_), u);
}

double DensitySpec::derivative(double u) const {
  if (u < 0.0 || u > 1.0) return 0.0;
  if (!pieces_.empty()) return poly_derivative(pieces_[piece_index(u)].coeffs, u);
  return pdf(u) * ((a_ - 1.0) / u - (b_ - 1.0) / (1.0 - u));
}

double DensitySpec::cdf(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  if (pieces_.empty()) return boost::math::ibeta(a_, b_, u);
  const int i = piece_index(u);
  const double before = i == 0 ? 0.0 : piece_mass_[i - 1];
  return before + poly_integral(pieces_[i].coeffs, pieces_[i].lo, u);
}

double DensitySpec::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  if (pieces_.empty())
    return boost::math::quantile(boost::math::beta_distribution<double>(a_, b_), p);
  std::size_t i = 0;
  while (i + 1 < pieces_.size() && piece_mass_[i] < p) ++i;
  const PolyPiece& pc = pieces_[i];
  const double target = p - (i == 0 ? 0.0 : piece_mass_[i - 1]);
  std::uintmax_t iters = 200;
  auto f = [&](double x) {
    return std::make_pair(poly_integral(pc.coeffs, pc.lo, x) - target, poly(pc.coeffs, x));
  };
  const double guess = pc.lo + (pc.hi - pc.lo) * 0.5;
  return boost::math::tools::newton_raphson_iterate(f, guess, pc.lo, pc.hi, 50, iters);
}

double DensitySpec::sample(rng::Engine& eng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return quantile(unif(eng));
}

SmoothnessParams DensitySpec::grid_smoothness(double safety, int grid) const {
  SmoothnessParams sp;
  sp.alpha = 1.0;
  sp.s = 1.0;
  double pmax = 0.0, lmax = 0.0;
  if (!pieces_.empty()) {
    // each piece on its own closed interval, so one-sided limits are included
    for (const auto& pc : pieces_) {
      for (int i = 0; i < grid; ++i) {
        const double u = pc.lo + (pc.hi - pc.lo) * i / (grid - 1);
        pmax = std::max(pmax, std::fabs(poly(pc.coeffs, u)));
        lmax = std::max(lmax, std::fabs(poly_derivative(pc.coeffs, u)));
      }
    }
  } else {
    for (int i = 1; i < grid - 1; ++i) {
      const double u = static_cast<double>(i) / (grid - 1);
      pmax = std::max(pmax, pdf(u));
      lmax = std::max(lmax, std::fabs(derivative(u)));
    }
  }
  sp.p_max = pmax * safety;
  sp.L = lmax * safety;
  return sp;
}

double sample_nonsmooth(rng::Engine& eng) {
  static const DensitySpec d = DensitySpec::nonsmooth_example();
  return d.sample(eng);
}

}  // namespace binomix
