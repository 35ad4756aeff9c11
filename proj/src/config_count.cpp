#include "cubelab/config_count.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace cubelab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename Array>
Index check_slots(const std::vector<Array>& fs, const Pattern& pattern) {
  if (static_cast<int>(fs.size()) != pattern.k() + 1)
    throw PreconditionError("lambda: pattern has " + std::to_string(pattern.k() + 1) + " points but " +
                            std::to_string(fs.size()) + " densities were given");
  const Index n = fs.front().size();
  if (n < 1) throw PreconditionError("lambda: empty density");
  for (const auto& f : fs)
    if (f.size() != n) throw PreconditionError("lambda: densities live on different grids");
  if (n % pattern.denominator != 0)
    throw PreconditionError("lambda: grid size " + std::to_string(n) + " is not divisible by the pattern denominator " +
                            std::to_string(pattern.denominator));
  return n;
}

/// n^{-2} sum_{x,r} term(x, r), summed per r then across r, both in tree order.
template <typename Term>
Complex grid_mean(Index n, Term&& term) {
  std::vector<Complex> per_r(static_cast<std::size_t>(n));
  std::vector<Complex> row(static_cast<std::size_t>(n));
  for (Index r = 0; r < n; ++r) {
    for (Index x = 0; x < n; ++x) row[static_cast<std::size_t>(x)] = term(x, r);
    per_r[static_cast<std::size_t>(r)] = pairwise_sum(std::span<const Complex>(row));
  }
  const double norm = static_cast<double>(n) * static_cast<double>(n);
  return pairwise_sum(std::span<const Complex>(per_r)) / norm;
}

template <typename Array>
Complex direct_lambda(const WeightFunction* g, const std::vector<Array>& fs, const Pattern& pattern, WrapMode mode) {
  const Index n = fs.front().size();
  return grid_mean(n, [&](Index x, Index r) -> Complex {
    Complex product = g ? (*g)(x, r) : Complex{1.0, 0.0};
    for (std::size_t t = 0; t < fs.size(); ++t) {
      const auto pos = slot_position(x, r, pattern.numerators[t], n, mode);
      if (!pos) return {0.0, 0.0};
      product *= fs[t](*pos);
    }
    return product;
  });
}

long mod_inverse(long a, long m) {
  long old_r = a, r = m, old_s = 1, s = 0;
  while (r != 0) {
    const long q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
  }
  return ((old_s % m) + m) % m;
}

/// Sum over frequency tuples with sum_t xi_t = 0 and sum_t c_t xi_t = 0 (mod n)
/// of prod_t f^_t(xi_t), after translating c_0 to 0.
Complex fourier_lambda(const std::vector<RealArray>& fs, const Pattern& pattern) {
  const Index n = fs.front().size();
  const int k = pattern.k();
  const long nl = static_cast<long>(n);
  std::vector<ComplexArray> spectra;
  for (const auto& f : fs) spectra.push_back(dft(f.cast<Complex>()));
  std::vector<long> c;
  for (long num : pattern.numerators) c.push_back(((num - pattern.numerators.front()) % nl + nl) % nl);

  // c_1 xi_1 = rhs (mod n) has gcd(c_1, n) solutions when gcd divides rhs
  const long g = std::gcd(c[1], nl);
  const long reduced_n = nl / g;
  const long inverse = reduced_n == 1 ? 0 : mod_inverse((c[1] / g) % reduced_n, reduced_n);

  const Index free_count = k >= 2 ? static_cast<Index>(std::pow(static_cast<double>(n), k - 2)) : 1;
  const Index inner = k >= 2 ? n : 1;
  std::vector<Complex> blocks(static_cast<std::size_t>(free_count));
  std::vector<long> xi(static_cast<std::size_t>(k + 1), 0L);
  std::vector<Complex> terms;
  for (Index block = 0; block < free_count; ++block) {
    Index rest = block;
    for (int t = 3; t <= k; ++t) {
      xi[static_cast<std::size_t>(t)] = static_cast<long>(rest % n);
      rest /= n;
    }
    terms.clear();
    for (Index i = 0; i < inner; ++i) {
      if (k >= 2) xi[2] = static_cast<long>(i);
      long rhs = 0;
      for (int t = 2; t <= k; ++t) rhs = (rhs - c[static_cast<std::size_t>(t)] * xi[static_cast<std::size_t>(t)]) % nl;
      rhs = (rhs + nl) % nl;
      if (rhs % g != 0) continue;
      const long base = ((rhs / g) % reduced_n) * inverse % reduced_n;
      for (long m = 0; m < g; ++m) {
        xi[1] = base + m * reduced_n;
        long total = 0;
        for (int t = 1; t <= k; ++t) total += xi[static_cast<std::size_t>(t)];
        xi[0] = ((-total) % nl + nl) % nl;
        Complex product = spectra[0](xi[0]);
        for (int t = 1; t <= k; ++t) product *= spectra[static_cast<std::size_t>(t)](xi[static_cast<std::size_t>(t)]);
        terms.push_back(product);
      }
    }
    blocks[static_cast<std::size_t>(block)] = pairwise_sum(std::span<const Complex>(terms));
  }
  return pairwise_sum(std::span<const Complex>(blocks));
}

}  // namespace

std::optional<Index> slot_position(Index x, Index r, long offset, Index n, WrapMode mode) {
  if (mode == WrapMode::Cyclic) return wrap(static_cast<long>(x) - offset * static_cast<long>(r), n);
  const long pos = static_cast<long>(x) - offset * signed_frequency(r, n);
  if (pos < 0 || pos >= static_cast<long>(n)) return std::nullopt;
  return static_cast<Index>(pos);
}

ConfigCount lambda(const WeightFunction* g, const std::vector<RealArray>& fs, const Pattern& pattern, WrapMode mode,
                   LambdaMethod method) {
  const Index n = check_slots(fs, pattern);
  if (g && g->size() != n) throw PreconditionError("lambda: weight and densities live on different grids");
  const bool fast_ok = !g && mode == WrapMode::Cyclic;
  if (method == LambdaMethod::Fourier && !fast_ok)
    throw PreconditionError("lambda: the Fourier path needs g = 1 and cyclic arithmetic");
  ConfigCount out;
  out.pattern = pattern;
  const bool fast = method == LambdaMethod::Fourier || (method == LambdaMethod::Auto && fast_ok);
  out.value = fast ? fourier_lambda(fs, pattern) : direct_lambda(g, fs, pattern, mode);
  return out;
}

ConfigCount lambda(const WeightFunction* g, const RealArray& f, const Pattern& pattern, WrapMode mode,
                   LambdaMethod method) {
  return lambda(g, std::vector<RealArray>(static_cast<std::size_t>(pattern.k() + 1), f), pattern, mode, method);
}

Complex lambda_complex(const WeightFunction* g, const std::vector<ComplexArray>& fs, const Pattern& pattern,
                       WrapMode mode) {
  const Index n = check_slots(fs, pattern);
  if (g && g->size() != n) throw PreconditionError("lambda: weight and densities live on different grids");
  return direct_lambda(g, fs, pattern, mode);
}

LadderReport lambda_ladder(const WeightFunction* g, const GridMeasure& m, const Pattern& pattern, int max_level,
                           Taper taper) {
  if (max_level < 0) throw PreconditionError("lambda_ladder: max level must be nonnegative");
  LadderReport report;
  for (int level = 0; level <= max_level; ++level) {
    const MollifiedDensity mol = mollify(m, level, taper);
    LadderStep step;
    step.level = level;
    step.saturated = mol.saturated;
    step.value = lambda(g, mol.density, pattern).value;
    step.diff = report.steps.empty() ? kNaN : std::abs(step.value - report.steps.back().value);
    step.ratio = (report.steps.size() < 2 || !(report.steps.back().diff > 0.0)) ? kNaN
                                                                                 : step.diff / report.steps.back().diff;
    report.steps.push_back(step);
    if (mol.saturated) {
      report.saturated = true;
      break;
    }
  }

  std::vector<double> lx, ly;
  bool any_diff = false;
  for (const auto& s : report.steps) {
    if (std::isnan(s.diff)) continue;
    any_diff = true;
    if (s.diff > 1e-13 * std::max(1.0, std::abs(s.value))) {
      lx.push_back(s.level);
      ly.push_back(std::log(s.diff));
    }
  }
  if (any_diff && lx.empty()) {
    report.fitted_ratio = 0.0;
    report.converged = true;
  } else if (lx.size() >= 2) {
    report.fitted_ratio = std::exp(fit_line(lx, ly).slope);
    report.converged = report.fitted_ratio < 1.0;
  } else {
    report.fitted_ratio = kNaN;
  }
  return report;
}

double marginal_exponent(int k) {
  const double two_k = std::ldexp(1.0, k);
  return two_k / (two_k - 1.0);
}

MarginalDensity marginal(const std::vector<RealArray>& fs, const Pattern& pattern, std::vector<double> p_norms,
                         double threshold, WrapMode mode) {
  const Index n = check_slots(fs, pattern);
  MarginalDensity out;
  out.threshold = threshold;
  out.rho.resize(n);
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Index r = 0; r < n; ++r) {
    for (Index x = 0; x < n; ++x) {
      double product = 1.0;
      for (std::size_t t = 0; t < fs.size() && product != 0.0; ++t) {
        const auto pos = slot_position(x, r, pattern.numerators[t], n, mode);
        product = pos ? product * fs[t](*pos) : 0.0;
      }
      row[static_cast<std::size_t>(x)] = product;
    }
    out.rho(r) = pairwise_sum(std::span<const double>(row)) / static_cast<double>(n);
  }
  if (p_norms.empty()) p_norms.push_back(marginal_exponent(pattern.k()));
  for (double p : p_norms) {
    if (!(p >= 1.0)) throw PreconditionError("marginal: norm exponents must be at least 1");
    const RealArray powered = std::isinf(p) ? RealArray(out.rho.abs()) : RealArray(out.rho.abs().pow(p));
    out.p_norms[p] = std::isinf(p) ? powered.maxCoeff()
                                   : std::pow(pairwise_sum(powered) / static_cast<double>(n), 1.0 / p);
  }
  const Index positive = (out.rho > threshold).count();
  out.positive_fraction = static_cast<double>(positive) / static_cast<double>(n);
  const Index positive_nonzero = positive - (out.rho(0) > threshold ? 1 : 0);
  out.positive_fraction_nonzero = n > 1 ? static_cast<double>(positive_nonzero) / static_cast<double>(n - 1) : 0.0;
  return out;
}

std::vector<Index> support_distance(const GridMeasure& m) {
  const Index n = m.size();
  const RealArray& w = m.weights();
  std::vector<Index> dist(static_cast<std::size_t>(n), n);
  if (!(w > 0.0).any()) return dist;
  // two sweeps around the circle cover every wrap-around path
  Index last = -1;
  for (Index pass = 0; pass < 2 * n; ++pass) {
    const Index x = pass % n;
    if (w(x) > 0.0) last = pass;
    if (last >= 0) dist[static_cast<std::size_t>(x)] = std::min(dist[static_cast<std::size_t>(x)], pass - last);
  }
  last = -1;
  for (Index pass = 2 * n - 1; pass >= 0; --pass) {
    const Index x = pass % n;
    if (w(x) > 0.0) last = pass;
    if (last >= 0) dist[static_cast<std::size_t>(x)] = std::min(dist[static_cast<std::size_t>(x)], last - pass);
  }
  return dist;
}

SupportDiagnostic support_diagnostic(const GridMeasure& m, const Pattern& pattern, int level, double gap_cells,
                                     double delta, Taper taper) {
  const Index n = m.size();
  if (n % pattern.denominator != 0) throw PreconditionError("support_diagnostic: pattern denominator must divide n");
  const std::vector<Index> dist = support_distance(m);
  const MollifiedDensity mol = mollify(m, level, taper);
  const RealArray positive = mol.density.max(0.0);

  SupportDiagnostic out;
  out.level = level;
  out.saturated = mol.saturated;
  const auto slots = pattern.numerators.size();
  std::vector<double> leak(static_cast<std::size_t>(n)), leak_signed(static_cast<std::size_t>(n)),
      trivial(static_cast<std::size_t>(n)), total(static_cast<std::size_t>(n));
  std::vector<double> row_leak(static_cast<std::size_t>(n)), row_signed(static_cast<std::size_t>(n)),
      row_total(static_cast<std::size_t>(n));
  for (Index r = 0; r < n; ++r) {
    for (Index x = 0; x < n; ++x) {
      double pos_product = 1.0, signed_product = 1.0;
      bool outside = false;
      for (std::size_t t = 0; t < slots; ++t) {
        const Index p = wrap(static_cast<long>(x) - pattern.numerators[t] * static_cast<long>(r), n);
        pos_product *= positive(p);
        signed_product *= mol.density(p);
        outside = outside || static_cast<double>(dist[static_cast<std::size_t>(p)]) > gap_cells;
      }
      const auto i = static_cast<std::size_t>(x);
      row_total[i] = pos_product;
      row_leak[i] = outside ? pos_product : 0.0;
      row_signed[i] = outside ? signed_product : 0.0;
    }
    const auto i = static_cast<std::size_t>(r);
    total[i] = pairwise_sum(std::span<const double>(row_total));
    leak[i] = pairwise_sum(std::span<const double>(row_leak));
    leak_signed[i] = pairwise_sum(std::span<const double>(row_signed));
    const double r_torus = static_cast<double>(pattern.denominator) *
                           static_cast<double>(std::abs(signed_frequency(r, n))) / static_cast<double>(n);
    trivial[i] = r_torus <= delta ? total[i] : 0.0;
  }
  const double norm = static_cast<double>(n) * static_cast<double>(n);
  out.leakage = pairwise_sum(std::span<const double>(leak)) / norm;
  out.leakage_signed = pairwise_sum(std::span<const double>(leak_signed)) / norm;
  out.trivial_mass = pairwise_sum(std::span<const double>(trivial)) / norm;
  out.total = pairwise_sum(std::span<const double>(total)) / norm;
  return out;
}

TelescopingTerms telescoping_terms(const WeightFunction* g, const std::vector<RealArray>& a,
                                   const std::vector<RealArray>& b, const Pattern& pattern) {
  check_slots(a, pattern);
  check_slots(b, pattern);
  auto to_complex = [](const std::vector<RealArray>& fs) {
    std::vector<ComplexArray> out;
    for (const auto& f : fs) out.push_back(f.cast<Complex>());
    return out;
  };
  const auto ca = to_complex(a), cb = to_complex(b);
  TelescopingTerms out;
  out.lhs = lambda_complex(g, ca, pattern) - lambda_complex(g, cb, pattern);
  for (std::size_t j = 0; j < a.size(); ++j) {
    std::vector<ComplexArray> slots;
    for (std::size_t t = 0; t < a.size(); ++t) slots.push_back(t < j ? cb[t] : t == j ? ComplexArray(ca[t] - cb[t]) : ca[t]);
    out.terms.push_back(lambda_complex(g, slots, pattern));
  }
  out.sum = pairwise_sum(std::span<const Complex>(out.terms));
  return out;
}

std::vector<long> gcs_dilations(const Pattern& pattern) {
  std::vector<long> d;
  const long last = pattern.numerators.back();
  for (int j = 1; j <= pattern.k(); ++j) d.push_back(last - pattern.numerators[static_cast<std::size_t>(j - 1)]);
  return d;
}

GcsCheck gcs_check(const ComplexArray& gamma, const std::vector<RealArray>& hs, const RealArray& f,
                   const Pattern& pattern, const ComputeBudget& budget) {
  if (pattern.k() != 2) throw PreconditionError("gcs_check: only three-point patterns are supported");
  if (hs.size() != 2) throw PreconditionError("gcs_check: expected two bounded slots");
  const WeightFunction g = WeightFunction::dilation_only(gamma);
  std::vector<ComplexArray> slots{hs[0].cast<Complex>(), hs[1].cast<Complex>(), f.cast<Complex>()};
  GcsCheck out;
  out.lhs = std::abs(lambda_complex(&g, slots, pattern));
  const std::vector<long> dil = gcs_dilations(pattern);
  const Complex pairing = gowers_inner(f, g.transposed(), 2, budget, dil);
  out.rhs = hs[0].abs().maxCoeff() * hs[1].abs().maxCoeff() * std::pow(std::abs(pairing), 0.25);
  out.slack = out.rhs - out.lhs;
  return out;
}

}  // namespace cubelab
