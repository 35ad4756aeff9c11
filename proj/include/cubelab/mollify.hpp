#pragma once

// Approximate-identity ladder realized as spectral multipliers: level L keeps
// |xi| <= 2^L untouched and removes |xi| >= 2^{L+1}; the band between is tapered.

#include <string>
#include <utility>
#include <vector>

#include "cubelab/torus_measure.hpp"

namespace cubelab {

enum class Taper { RaisedCosine };

Taper parse_taper(const std::string& name);
std::string taper_name(Taper taper);

class MollifierLadder {
 public:
  explicit MollifierLadder(Index n, Taper taper = Taper::RaisedCosine);

  Index size() const { return n_; }
  Taper taper() const { return taper_; }

  /// The plateau already covers every frequency on the grid (2^{L+1} >= n/2).
  bool saturated(int level) const;
  /// Deepest level that is not saturated, or -1 if level 0 already is.
  int max_unsaturated_level() const;

  /// Multiplier value at signed frequency xi.
  double value(int level, long xi) const;
  /// Multiplier in DFT order; all ones when saturated.
  RealArray multiplier(int level) const;

 private:
  Index n_;
  Taper taper_;
};

struct MollifiedDensity {
  RealArray density;
  int level = 0;
  bool saturated = false;
  /// Largest value of max(-density, 0); the spectral kernel is not positive.
  double negative_part = 0.0;
};

MollifiedDensity mollify(const RealArray& density, int level, Taper taper = Taper::RaisedCosine);
inline MollifiedDensity mollify(const GridMeasure& m, int level, Taper taper = Taper::RaisedCosine) {
  return mollify(m.weights(), level, taper);
}

/// nu_L = mu_{L+1} - mu_L. Zero with the flag set when either level saturates.
MollifiedDensity ladder_diff(const RealArray& density, int level, Taper taper = Taper::RaisedCosine);
inline MollifiedDensity ladder_diff(const GridMeasure& m, int level, Taper taper = Taper::RaisedCosine) {
  return ladder_diff(m.weights(), level, taper);
}

/// The level-L kernel as a density: the mollified unit point mass at 0.
RealArray mollifier_kernel(Index n, int level, Taper taper = Taper::RaisedCosine);

/// Spatial decay of the kernel: (distance d in cells, (1/n) sum_{|x| > d} |kernel(x)|)
/// for d = 0, 1, 2, 4, ... < n/2.
std::vector<std::pair<Index, double>> kernel_tail(Index n, int level, Taper taper = Taper::RaisedCosine);

}  // namespace cubelab
