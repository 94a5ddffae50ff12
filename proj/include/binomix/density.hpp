#pragma once

#include <string>
#include <vector>

#include "binomix/rng.hpp"

namespace binomix {

/// Constants of a mixing density entering the error bounds.
struct SmoothnessParams {
  double L = 0.0;      // Hoelder constant
  double alpha = 1.0;  // Hoelder exponent in (0, 1]
  double p_max = 0.0;  // sup of the density
  double s = 1.0;      // smoothness index
};

enum class DensityForm { beta, piecewise };

/// Polynomial piece on (lo, hi]; coefficients in u, lowest degree first.
struct PolyPiece {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> coeffs;
};

/// A known mixing density on [0, 1]: Beta(a, b) or a piecewise polynomial.
/// Immutable once built.
class DensitySpec {
 public:
  static DensitySpec beta(double a, double b);
  static DensitySpec uniform();
  /// Pieces are normalized to integrate to 1; the raw integral is kept.
  static DensitySpec piecewise(std::vector<PolyPiece> pieces, std::string name = "piecewise");
  /// The four-piece density with kinks and jumps at 0.25, 0.5, 0.75.
  static DensitySpec nonsmooth_example();
  /// "beta:a,b", "uniform" or "nonsmooth".
  static DensitySpec parse(const std::string& text);

  DensityForm form() const { return form_; }
  const std::string& name() const { return name_; }
  double beta_a() const { return a_; }
  double beta_b() const { return b_; }
  bool integer_beta() const;
  /// Normalized pieces (integer Beta densities are also expanded to one piece).
  const std::vector<PolyPiece>& pieces() const { return pieces_; }
  /// Integral of the unnormalized pieces (1 for Beta densities).
  double raw_normalizer() const { return raw_norm_; }
  /// Interior points where the density or its derivative may jump.
  std::vector<double> breakpoints() const;

  double pdf(double u) const;
  /// Derivative of the density on the piece containing u.
  double derivative(double u) const;
  double cdf(double u) const;
  double quantile(double p) const;
  double sample(rng::Engine& eng) const;

  /// Documented constants (analytic where available).
  const SmoothnessParams& smoothness() const { return smooth_; }
  /// s = alpha = 1; p_max and L from a dense grid sup (both one-sided limits at
  /// breakpoints) times `safety`.
  SmoothnessParams grid_smoothness(double safety = 1.001, int grid = 10001) const;

 private:
  DensitySpec() = default;
  int piece_index(double u) const;

  DensityForm form_ = DensityForm::piecewise;
  std::string name_;
  double a_ = 1.0;
  double b_ = 1.0;
  std::vector<PolyPiece> pieces_;
  std::vector<double> piece_mass_;  // cumulative mass at each piece's right end
  double raw_norm_ = 1.0;
  SmoothnessParams smooth_;
};

/// Inversion draw from the nonsmooth example density.
double sample_nonsmooth(rng::Engine& eng);

}  // namespace binomix
