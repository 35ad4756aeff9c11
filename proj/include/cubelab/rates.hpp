#pragma once

// Closed-form decay rates r_k and omega_k^p, and the telescoping experiment
// that fits the decay of ||mu_{L+1} - mu_L||_{U^k} across mollifier levels.

#include <optional>
#include <string>
#include <vector>

#include "cubelab/gowers.hpp"
#include "cubelab/mollify.hpp"

namespace cubelab {

struct RateParams {
  int k = 2;
  int d = 1;
  double alpha = 1.0;
  double beta = 1.0;
  double p = 1.0;

  /// p / (p - 1), infinite at p = 1.
  double p_conjugate() const;
};

/// r_k = prod_{j=3}^{k} [2 - 2^{3j-2} / (2^{3j-2} - (1 - (j+1) beta / (j d)))] * (2 beta - d).
double r_rate(const RateParams& params);

/// omega = r_k (p' - 2)/p' - 2^{k+1} (1 - alpha)/p', which is r_k at p = 1.
/// `raw_sign` returns the negated expression instead.
double omega(const RateParams& params, bool raw_sign = false);

struct TelescopeRow {
  int level = 0;
  double norm = 0.0;
  double log2_norm = 0.0;
};

/// ||nu_L||_{U^k} for every level L with mu_L and mu_{L+1} both unsaturated, up to max_level.
std::vector<TelescopeRow> telescope_ladder(const GridMeasure& m, int k, int max_level,
                                           Taper taper = Taper::RaisedCosine, const ComputeBudget& budget = {});

enum class Verdict { PassTrivial, PassStrong, PassWeak, Fail };
std::string verdict_name(Verdict v);

struct VerdictThresholds {
  /// Weak pass needs slope <= -weak_factor * r_k / 2^k.
  double weak_factor = 0.5;
  /// Strong pass also needs |slope + r_k / 2^k| <= strong_tolerance.
  double strong_tolerance = 0.3;
};

struct RateResult {
  double r_k = 0.0;
  double omega_kp = 0.0;
  std::optional<double> empirical_slope;
  /// empiricalSlope + r_k / 2^k: zero when the fit matches the predicted slope -r_k / 2^k.
  std::optional<double> prediction_gap;
  bool pass_weak = false;
  bool pass_strong = false;
  Verdict verdict = Verdict::Fail;
  std::size_t fitted_levels = 0;
};

/// Least-squares slope of log2 norm against level over the nonzero rows.
RateResult telescope_fit(const std::vector<TelescopeRow>& ladder, const RateParams& params,
                         const VerdictThresholds& thresholds = {});

/// Maps a fitted decay exponent into (0, 1]: INF and values above 1 become 1.
double clamp_exponent(double value);

}  // namespace cubelab
