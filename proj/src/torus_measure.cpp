#include "cubelab/torus_measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace cubelab {

GridMeasure::GridMeasure(RealArray weights, double clamp) : weights_(std::move(weights)), clamp_(clamp) {
  mass_ = pairwise_sum(weights_) / static_cast<double>(weights_.size());
}

GridMeasure GridMeasure::from_weights(RealArray weights) {
  if (weights.size() < 1) throw PreconditionError("GridMeasure: grid size must be positive");
  double clamp = 0.0;
  for (Index i = 0; i < weights.size(); ++i) {
    const double w = weights(i);
    if (!std::isfinite(w)) throw PreconditionError("GridMeasure: non-finite weight at index " + std::to_string(i));
    if (w < 0.0) {
      if (w < -kClampTolerance)
        throw PreconditionError("GridMeasure: negative weight " + std::to_string(w) + " at index " + std::to_string(i));
      clamp = std::max(clamp, -w);
      weights(i) = 0.0;
    }
  }
  return GridMeasure(std::move(weights), clamp);
}

GridMeasure GridMeasure::uniform(Index n) {
  if (n < 1) throw PreconditionError("uniform: grid size must be positive");
  return GridMeasure(RealArray::Ones(n), 0.0);
}

GridMeasure GridMeasure::dirac(Index n, Index at) {
  if (n < 1) throw PreconditionError("dirac: grid size must be positive");
  RealArray w = RealArray::Zero(n);
  w(wrap(static_cast<long>(at), n)) = static_cast<double>(n);
  return GridMeasure(std::move(w), 0.0);
}

namespace {

Index checked_power(int base, int levels) {
  Index n = 1;
  for (int i = 0; i < levels; ++i) {
    if (n > (Index{1} << 40) / base) throw PreconditionError("cantor: grid size base^levels is too large");
    n *= base;
  }
  return n;
}

}  // namespace

GridMeasure cantor_deterministic(int base, std::vector<int> keep, int levels) {
  if (base < 2) throw PreconditionError("cantor: base must be at least 2");
  if (levels < 1) throw PreconditionError("cantor: levels must be at least 1");
  const std::set<int> digits(keep.begin(), keep.end());
  if (digits.empty()) throw PreconditionError("cantor: keep must be nonempty");
  if (digits.size() != keep.size()) throw PreconditionError("cantor: keep has repeated digits");
  if (*digits.begin() < 0 || *digits.rbegin() >= base) throw PreconditionError("cantor: keep digit outside [0, base)");
  if (static_cast<int>(digits.size()) == base)
    throw PreconditionError("cantor: keeping every digit gives Lebesgue measure; use the uniform constructor");

  checked_power(base, levels);
  const double factor = static_cast<double>(base) / static_cast<double>(digits.size());
  RealArray w = RealArray::Ones(1);
  for (int level = 0; level < levels; ++level) {
    RealArray next = RealArray::Zero(w.size() * base);
    for (Index cell = 0; cell < w.size(); ++cell)
      for (int d : digits) next(cell * base + d) = w(cell) * factor;
    w.swap(next);
  }
  return GridMeasure::from_weights(std::move(w));
}

GridMeasure cantor_random(int base, int branches, int levels, std::uint64_t seed) {
  if (base < 2) throw PreconditionError("cantor_random: base must be at least 2");
  if (levels < 1) throw PreconditionError("cantor_random: levels must be at least 1");
  if (branches < 1 || branches >= base) throw PreconditionError("cantor_random: branches must satisfy 1 <= t < base");
  checked_power(base, levels);

  Rng rng(seed);
  const double factor = static_cast<double>(base) / static_cast<double>(branches);
  RealArray w = RealArray::Ones(1);
  for (int level = 0; level < levels; ++level) {
    RealArray next = RealArray::Zero(w.size() * base);
    for (Index cell = 0; cell < w.size(); ++cell) {
      if (w(cell) == 0.0) continue;
      for (long d : rng.sample(base, branches)) next(cell * base + d) = w(cell) * factor;
    }
    w.swap(next);
  }
  return GridMeasure::from_weights(std::move(w));
}

Spectrum fourier(const RealArray& density) {
  if (density.size() < 1) throw PreconditionError("fourier: empty density");
  return {density.size(), dft(density.cast<Complex>())};
}

Spectrum fourier(const GridMeasure& m) { return fourier(m.weights()); }

RealArray inverse_fourier(const Spectrum& s) { return synthesize(s.coeffs).real(); }

std::vector<double> default_radii(Index n) {
  std::vector<double> radii;
  for (Index m = 1; 4 * m <= n; m *= 2) radii.push_back(static_cast<double>(m) / static_cast<double>(n));
  return radii;
}

double max_ball_mass(const GridMeasure& m, double radius) {
  const Index n = m.size();
  const double cells = radius * static_cast<double>(n);
  const auto half = static_cast<Index>(std::llround(cells));
  if (half < 1 || std::abs(cells - static_cast<double>(half)) > 1e-9)
    throw PreconditionError("frostman: radius " + std::to_string(radius) + " is not a positive multiple of 1/n");
  if (2 * half >= n) return m.mass();

  // prefix over three periods so every window [x - half, x + half) is contiguous
  const RealArray& w = m.weights();
  std::vector<double> prefix(static_cast<std::size_t>(3 * n + 1), 0.0);
  for (Index i = 0; i < 3 * n; ++i)
    prefix[static_cast<std::size_t>(i + 1)] = prefix[static_cast<std::size_t>(i)] + w(i % n);
  double best = 0.0;
  for (Index x = 0; x < n; ++x) {
    const auto lo = static_cast<std::size_t>(n + x - half);
    const auto hi = static_cast<std::size_t>(n + x + half);
    best = std::max(best, prefix[hi] - prefix[lo]);
  }
  return best / static_cast<double>(n);
}

FrostmanReport frostman_fit(const GridMeasure& m, std::span<const double> radii) {
  if (radii.size() < 3) throw PreconditionError("frostman: at least three radii are required");
  FrostmanReport report;
  for (double r : radii) report.samples.emplace_back(r, max_ball_mass(m, r));
  std::sort(report.samples.begin(), report.samples.end());

  const double first = report.samples.front().second;
  const bool all_equal = std::all_of(report.samples.begin(), report.samples.end(), [&](const auto& s) {
    return std::abs(s.second - first) <= 1e-12 * std::max(1.0, std::abs(first));
  });
  if (all_equal || first <= 0.0) {
    report.degenerate = true;
    report.alpha_hat = 0.0;
    report.c1_hat = report.samples.back().second;
    return report;
  }

  std::vector<double> lx, ly;
  for (const auto& [r, mass] : report.samples) {
    if (mass <= 0.0) continue;
    lx.push_back(std::log(r));
    ly.push_back(std::log(mass));
  }
  const LineFit fit = fit_line(lx, ly);
  report.alpha_hat = std::clamp(fit.slope, 0.0, 1.0);
  report.c1_hat = std::exp(fit.intercept);
  return report;
}

namespace {

struct Annulus {
  int index = 0;
  double max = 0.0;
  double sum = 0.0;
  long count = 0;
};

double fit_exponent(const std::vector<double>& lx, const std::vector<double>& ly, int order, double* intercept) {
  const LineFit fit = fit_line(lx, ly);
  if (intercept) *intercept = fit.intercept;
  return -2.0 / static_cast<double>(order + 1) * fit.slope;
}

}  // namespace

DecayReport fit_annuli(std::span<const std::pair<long, double>> samples, double zero_value, int order,
                       long max_radius) {
  DecayReport report;
  report.order = order;
  std::vector<Annulus> annuli;
  for (int j = 0; (1L << j) <= max_radius; ++j) annuli.push_back({j, 0.0, 0.0, 0});
  for (const auto& [radius, value] : samples) {
    if (radius < 1 || radius > max_radius) continue;
    int j = 0;
    while ((2L << j) <= radius) ++j;
    Annulus& a = annuli[static_cast<std::size_t>(j)];
    a.max = std::max(a.max, value);
    a.sum += value;
    ++a.count;
  }

  std::vector<double> lx, ly, mx, my;
  for (const Annulus& a : annuli) {
    report.annuli.emplace_back(a.index, a.max);
    if (a.max > zero_value) {
      lx.push_back(std::log(std::ldexp(1.0, a.index)));
      ly.push_back(std::log(a.max));
    }
    const double mean = a.count ? a.sum / static_cast<double>(a.count) : 0.0;
    if (mean > zero_value) {
      mx.push_back(std::log(std::ldexp(1.0, a.index)));
      my.push_back(std::log(mean));
    }
  }
  if (lx.empty()) return report;  // nothing beyond frequency 0: betaHat stays INF
  if (lx.size() < 3)
    throw PreconditionError("decay_fit: only " + std::to_string(lx.size()) + " nonzero annuli; at least three are required");

  double intercept = 0.0;
  double beta = fit_exponent(lx, ly, order, &intercept);
  if (beta < -1e-12) report.clamped = true;
  report.beta_hat = std::max(beta, 0.0) + 0.0;
  report.c2_hat = std::exp(intercept);
  if (mx.size() >= 3) report.beta_hat_mean = std::max(fit_exponent(mx, my, order, nullptr), 0.0) + 0.0;
  return report;
}

DecayReport decay_fit(const Spectrum& s) {
  const Index n = s.n;
  if (n < 2) throw PreconditionError("decay_fit: grid too small");
  // |mu^(xi)|^2 is the order-1 cube spectrum at eta = -xi
  const double scale = std::max(std::norm(s.coeffs(0)), 1e-300);
  std::vector<std::pair<long, double>> samples;
  samples.reserve(static_cast<std::size_t>(n));
  for (Index i = 1; i < n; ++i) samples.emplace_back(abs_frequency(i, n), std::norm(s.coeffs(i)));
  return fit_annuli(samples, 1e-24 * scale, 1, static_cast<long>(n / 2));
}

}  // namespace cubelab
