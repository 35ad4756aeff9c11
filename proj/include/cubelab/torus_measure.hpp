#pragma once

// Discretized measures on the torus T = R/Z sampled on an n-point grid.
//
// A GridMeasure stores a density with respect to normalized counting
// measure: cell x covers [x/n, (x+1)/n) and carries mass weights(x)/n, so
// the uniform probability measure is the constant 1.

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "cubelab/numeric.hpp"

namespace cubelab {

class GridMeasure {
 public:
  /// Validates nonnegativity. Entries in [-1e-12, 0) are clamped to zero and
  /// the largest clamp is remembered; anything more negative is rejected.
  static GridMeasure from_weights(RealArray weights);
  static GridMeasure uniform(Index n);
  /// Unit point mass in cell `at` (weight n there, 0 elsewhere).
  static GridMeasure dirac(Index n, Index at = 0);

  Index size() const { return weights_.size(); }
  const RealArray& weights() const { return weights_; }
  double mass() const { return mass_; }
  double clamp_magnitude() const { return clamp_; }

 private:
  GridMeasure(RealArray weights, double clamp);

  RealArray weights_;
  double mass_ = 0.0;
  double clamp_ = 0.0;
};

inline constexpr double kClampTolerance = 1e-12;

/// Self-similar Cantor measure: at each of `levels` subdivisions into `base`
/// children, the digits in `keep` survive with equal share of the parent mass.
GridMeasure cantor_deterministic(int base, std::vector<int> keep, int levels);

/// Random Cantor measure: every surviving cell independently keeps `branches`
/// of its `base` children, drawn uniformly without replacement.
GridMeasure cantor_random(int base, int branches, int levels, std::uint64_t seed);

/// Fourier coefficients on Z_n, stored in DFT order (index i is frequency
/// i mod n); at() takes signed frequencies.
struct Spectrum {
  Index n = 0;
  ComplexArray coeffs;

  Complex at(long xi) const { return coeffs(frequency_index(xi, n)); }
};

Spectrum fourier(const GridMeasure& m);
Spectrum fourier(const RealArray& density);
/// Density whose spectrum is `s` (real part; the imaginary part is round-off
/// for conjugate-symmetric spectra).
RealArray inverse_fourier(const Spectrum& s);

struct FrostmanReport {
  double alpha_hat = 0.0;
  double c1_hat = 0.0;
  /// (radius, largest ball mass), sorted by radius.
  std::vector<std::pair<double, double>> samples;
  bool degenerate = false;
};

/// Radii 2^j / n for 2^j <= n/4.
std::vector<double> default_radii(Index n);

/// Largest mass of a closed torus ball of radius r centred on a grid point.
/// With a piecewise-constant density and r = m/n the ball covers exactly the
/// 2m cells adjacent to its centre.
double max_ball_mass(const GridMeasure& m, double radius);

FrostmanReport frostman_fit(const GridMeasure& m, std::span<const double> radii);
inline FrostmanReport frostman_fit(const GridMeasure& m) {
  const auto radii = default_radii(m.size());
  return frostman_fit(m, radii);
}

struct DecayReport {
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  int order = 1;
  /// Exponent from annulus maxima; kInf when nothing beyond frequency 0 survives.
  double beta_hat = kInf;
  /// exp(intercept) of the fit, i.e. the constant in front of |eta|^{-(order+1) betaHat / 2}.
  double c2_hat = 0.0;
  /// (annulus index j for 2^j <= |eta| < 2^{j+1}, largest fitted value there).
  /// The fitted value is |mu^|^2 at order 1 and |cube spectrum| otherwise.
  std::vector<std::pair<int, double>> annuli;
  /// Same fit on the annulus mean of |value| instead of the maximum.
  double beta_hat_mean = kInf;
  /// betaHat came out negative and was clamped to 0.
  bool clamped = false;
};

/// Fits the decay of |mu^(xi)|^2, which is the order-1 cube spectrum of the
/// measure, so betaHat = -slope and |mu^(xi)| ~ |xi|^{-betaHat/2}.
DecayReport decay_fit(const Spectrum& s);

/// Shared fitting core over (sup-norm radius, |value|) samples. Values at or
/// below `zero_value` count as zero; the exponent is -2/(order+1) times the
/// log-log slope of annulus maxima against the annulus lower edge 2^j.
DecayReport fit_annuli(std::span<const std::pair<long, double>> samples, double zero_value, int order,
                       long max_radius);

}  // namespace cubelab
