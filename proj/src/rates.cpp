#include "cubelab/rates.hpp"

#include <cmath>
#include <limits>

namespace cubelab {

namespace {

void check_params(const RateParams& params) {
  if (params.k < 2) throw PreconditionError("rates: k must be at least 2");
  if (params.d < 1) throw PreconditionError("rates: d must be at least 1");
  if (!(params.beta > 0.0 && params.beta <= 1.0)) throw PreconditionError("rates: beta must lie in (0, 1]");
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) throw PreconditionError("rates: alpha must lie in (0, 1]");
}

}  // namespace

double RateParams::p_conjugate() const {
  return p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
}

double r_rate(const RateParams& params) {
  check_params(params);
  const double beta = params.beta;
  const double d = params.d;
  double product = 1.0;
  for (int j = 3; j <= params.k; ++j) {
    const double big = std::ldexp(1.0, 3 * j - 2);
    const double denom = big - (1.0 - (j + 1) * beta / (j * d));
    if (denom == 0.0) throw PreconditionError("r_rate: vanishing denominator at j = " + std::to_string(j));
    product *= 2.0 - big / denom;
  }
  return product * (2.0 * beta - d);
}

double omega(const RateParams& params, bool raw_sign) {
  if (!(params.p >= 1.0 && params.p < 2.0)) throw PreconditionError("omega: p must lie in [1, 2)");
  const double r = r_rate(params);
  double value = r;
  if (params.p != 1.0) {
    const double pc = params.p_conjugate();
    value = r * (pc - 2.0) / pc - std::ldexp(1.0, params.k + 1) * (1.0 - params.alpha) / pc;
  }
  return raw_sign ? -value : value;
}

std::vector<TelescopeRow> telescope_ladder(const GridMeasure& m, int k, int max_level, Taper taper,
                                           const ComputeBudget& budget) {
  std::vector<TelescopeRow> rows;
  for (int level = 0; level <= max_level; ++level) {
    const MollifiedDensity nu = ladder_diff(m, level, taper);
    if (nu.saturated) break;
    const double norm = u_norm(nu.density, k, NormRoute::Fourier, budget).value;
    rows.push_back({level, norm, norm > 0.0 ? std::log2(norm) : -std::numeric_limits<double>::infinity()});
  }
  return rows;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::PassTrivial:
      return "PASS-TRIVIAL";
    case Verdict::PassStrong:
      return "PASS-STRONG";
    case Verdict::PassWeak:
      return "PASS-WEAK";
    case Verdict::Fail:
      break;
  }
  return "FAIL";
}

RateResult telescope_fit(const std::vector<TelescopeRow>& ladder, const RateParams& params,
                         const VerdictThresholds& thresholds) {
  RateResult result;
  result.r_k = r_rate(params);
  result.omega_kp = omega(params);

  double scale = 0.0;
  for (const auto& row : ladder) scale = std::max(scale, row.norm);
  std::vector<double> x, y;
  for (const auto& row : ladder)
    if (row.norm > 1e-13 * std::max(scale, 1.0)) {
      x.push_back(row.level);
      y.push_back(std::log2(row.norm));
    }
  if (x.empty()) {
    result.verdict = Verdict::PassTrivial;
    result.pass_weak = result.pass_strong = true;
    return result;
  }
  if (x.size() < 4)
    throw PreconditionError("telescope_fit: need at least four levels with nonzero norms, got " +
                            std::to_string(x.size()));

  const double predicted = result.r_k / std::ldexp(1.0, params.k);
  const double slope = fit_line(x, y).slope;
  result.fitted_levels = x.size();
  result.empirical_slope = slope;
  result.prediction_gap = slope + predicted;
  result.pass_weak = slope < 0.0 && slope <= -thresholds.weak_factor * predicted;
  result.pass_strong = result.pass_weak && std::abs(slope + predicted) <= thresholds.strong_tolerance;
  result.verdict = result.pass_strong ? Verdict::PassStrong : result.pass_weak ? Verdict::PassWeak : Verdict::Fail;
  return result;
}

double clamp_exponent(double value) {
  if (std::isnan(value)) return 1.0;
  if (value > 1.0) return 1.0;
  return std::max(value, 1e-6);
}

}  // namespace cubelab
