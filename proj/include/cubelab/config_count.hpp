#pragma once

// The counting functional Lambda(g; f_0..f_k) = n^{-2} sum_{x,r} g(x,r) prod_t f_t(x - c_t r)
// on Z_n, its mollification ladder, the dilation marginal, and support
// diagnostics. c_t are the pattern numerators.

#include <map>
#include <optional>
#include <vector>

#include "cubelab/gowers.hpp"
#include "cubelab/mollify.hpp"
#include "cubelab/pattern.hpp"

namespace cubelab {

enum class LambdaMethod { Auto, Direct, Fourier };

struct ConfigCount {
  Complex value{0.0, 0.0};
  /// Mollification level, or -1 for raw densities.
  int level = -1;
  Pattern pattern;
};

/// Grid position of slot t at (x, r): x - c_t r, or nullopt when it leaves
/// [0, n) in truncated mode (r read as its signed representative there).
std::optional<Index> slot_position(Index x, Index r, long offset, Index n, WrapMode mode);

/// g == nullptr stands for g = 1. The Fourier path needs g = 1 and cyclic mode.
ConfigCount lambda(const WeightFunction* g, const std::vector<RealArray>& fs, const Pattern& pattern,
                   WrapMode mode = WrapMode::Cyclic, LambdaMethod method = LambdaMethod::Auto);
/// Complex slots, direct summation only.
Complex lambda_complex(const WeightFunction* g, const std::vector<ComplexArray>& fs, const Pattern& pattern,
                       WrapMode mode = WrapMode::Cyclic);
/// Same density in every slot.
ConfigCount lambda(const WeightFunction* g, const RealArray& f, const Pattern& pattern,
                   WrapMode mode = WrapMode::Cyclic, LambdaMethod method = LambdaMethod::Auto);

struct LadderStep {
  int level = 0;
  Complex value{0.0, 0.0};
  /// |Lambda_level - Lambda_{level-1}|; NaN at the first level.
  double diff = 0.0;
  /// diff_level / diff_{level-1}; NaN when undefined.
  double ratio = 0.0;
  bool saturated = false;
};

struct LadderReport {
  std::vector<LadderStep> steps;
  /// exp of the least-squares slope of log diff against level.
  double fitted_ratio = 0.0;
  bool converged = false;
  /// The ladder reached a saturated level (grid resolution limit).
  bool saturated = false;
};

/// Levels 0..max_level, stopping after the first saturated level.
LadderReport lambda_ladder(const WeightFunction* g, const GridMeasure& m, const Pattern& pattern, int max_level,
                           Taper taper = Taper::RaisedCosine);

struct MarginalDensity {
  RealArray rho;
  std::map<double, double> p_norms;
  double threshold = 1e-9;
  /// Fraction of r in Z_n with rho(r) > threshold, with and without r = 0.
  double positive_fraction = 0.0;
  double positive_fraction_nonzero = 0.0;
};

/// rho(r) = (1/n) sum_x prod_t f_t(x - c_t r); norms are ((1/n) sum |rho|^p)^{1/p}.
MarginalDensity marginal(const std::vector<RealArray>& fs, const Pattern& pattern, std::vector<double> p_norms = {},
                         double threshold = 1e-9, WrapMode mode = WrapMode::Cyclic);

/// The conjugate exponent 2^k / (2^k - 1).
double marginal_exponent(int k);

struct SupportDiagnostic {
  int level = 0;
  bool saturated = false;
  /// Lambda(1_E; max(mu_L, 0)) with E the (x, r) having a slot farther than the gap from supp(mu).
  double leakage = 0.0;
  /// The same with the signed mollified density.
  double leakage_signed = 0.0;
  /// Lambda(1_{|r| <= delta}; max(mu_L, 0)), r measured on the torus.
  double trivial_mass = 0.0;
  /// Lambda(1; max(mu_L, 0)).
  double total = 0.0;
};

/// `gap_cells` is the tube half-width in grid cells.
SupportDiagnostic support_diagnostic(const GridMeasure& m, const Pattern& pattern, int level, double gap_cells,
                                     double delta, Taper taper = Taper::RaisedCosine);

/// Wrapped distance in cells from each grid point to {weights > 0}.
std::vector<Index> support_distance(const GridMeasure& m);

struct TelescopingTerms {
  Complex lhs{0.0, 0.0};
  /// Term j replaces slot j by a_j - b_j, slots before j by b, after j by a.
  std::vector<Complex> terms;
  Complex sum{0.0, 0.0};
};

/// Lambda(g; a) - Lambda(g; b) against the sum of its k+1 hybrid terms.
TelescopingTerms telescoping_terms(const WeightFunction* g, const std::vector<RealArray>& a,
                                   const std::vector<RealArray>& b, const Pattern& pattern);

/// Directions d_j = c_k - c_{j-1}, j = 1..k, at which the last slot's cube is taken.
std::vector<long> gcs_dilations(const Pattern& pattern);

struct GcsCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

/// |Lambda(gamma(r); h_0, h_1, f)| against ||h_0||_inf ||h_1||_inf |<f, gamma>|^{1/4},
/// where the pairing is gowers_inner of order 2 at the pattern dilations with the
/// transposed weight. Three-point patterns only.
GcsCheck gcs_check(const ComplexArray& gamma, const std::vector<RealArray>& hs, const RealArray& f,
                   const Pattern& pattern, const ComputeBudget& budget = {});

}  // namespace cubelab
