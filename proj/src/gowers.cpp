#include "cubelab/gowers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cubelab {

namespace {

Index int_pow(Index n, int k) {
  Index out = 1;
  for (int i = 0; i < k; ++i) out *= n;
  return out;
}

double cells_of(Index n, int exponent) { return std::pow(static_cast<double>(n), exponent); }

/// Digits of `a` in base n, least significant first.
void decode(Index a, Index n, std::vector<long>& digits) {
  for (auto& d : digits) {
    d = static_cast<long>(a % n);
    a /= n;
  }
}

std::vector<long> check_dilations(std::span<const long> dilations, int k) {
  if (dilations.empty()) return std::vector<long>(static_cast<std::size_t>(k), 1L);
  if (static_cast<int>(dilations.size()) != k)
    throw PreconditionError("cube routines: expected " + std::to_string(k) + " dilations, got " +
                            std::to_string(dilations.size()));
  return {dilations.begin(), dilations.end()};
}

/// (1/n) sum_x a(x) conj(a(x + t)) for every t.
ComplexArray autocorrelation(const ComplexArray& a) {
  const Index n = a.size();
  const ComplexArray power = dft(a).abs2().cast<Complex>();
  return dft(power) * static_cast<double>(n);
}

/// Weight cube product from the x - u recursion: the vertex x - iota.u is
/// conjugated when k - |iota| is odd.
Complex weight_cube_product(const WeightFunction& g, Index x, Index y, std::span<const long> u) {
  const Index n = g.size();
  const auto k = u.size();
  Complex product{1.0, 0.0};
  for (unsigned long iota = 0; iota < (1UL << k); ++iota) {
    long offset = static_cast<long>(x);
    std::size_t weight = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (!(iota >> j & 1UL)) continue;
      offset -= u[j];
      ++weight;
    }
    const Complex value = g(wrap(offset, n), y);
    product *= ((k - weight) & 1U) ? std::conj(value) : value;
  }
  return product;
}

}  // namespace

double ComputeBudget::default_limit(int order) {
  if (order <= 1) return std::numeric_limits<double>::infinity();
  if (order == 2) return 64.0 * 64.0 * 64.0;
  return 32.0 * 32.0 * 32.0 * 32.0;
}

void ComputeBudget::check(double cells, int order, const std::string& what) const {
  const double cap = limit(order);
  if (cells <= cap) return;
  std::ostringstream msg;
  msg << what << " needs " << cells << " tensor cells at order " << order << ", over the budget of " << cap
      << " (raise it with --budget)";
  throw BudgetError(msg.str());
}

Complex CubeSpectrum::at(std::span<const long> eta) const {
  if (static_cast<int>(eta.size()) != k) throw PreconditionError("CubeSpectrum::at: wrong number of indices");
  Index flat = 0;
  for (int j = k - 1; j >= 0; --j) flat = flat * n + frequency_index(eta[static_cast<std::size_t>(j)], n);
  return values(flat);
}

CubeSpectrum cube_spectrum(const ComplexArray& f, int k, const ComputeBudget& budget,
                           std::span<const long> dilations) {
  const Index n = f.size();
  if (n < 1) throw PreconditionError("cube_spectrum: empty density");
  if (k < 1) throw PreconditionError("cube_spectrum: order must be at least 1");
  budget.check(cells_of(n, k + 1), k, "cube_spectrum");
  const std::vector<long> dil = check_dilations(dilations, k);
  const std::span<const long> inner_dil(dil.data(), dil.size() - 1);

  const Index outer = int_pow(n, k - 1);
  ComplexArray c(outer * n);
  std::vector<long> u(static_cast<std::size_t>(k - 1));
  ComplexArray a(n);
  for (Index idx = 0; idx < outer; ++idx) {
    decode(idx, n, u);
    for (Index x = 0; x < n; ++x) a(x) = cube_product(f, x, u, inner_dil);
    const ComplexArray corr = autocorrelation(a);
    for (Index t = 0; t < n; ++t) c(idx + outer * t) = corr(wrap(dil.back() * static_cast<long>(t), n));
  }
  fft_axes(c, n, k);
  c /= static_cast<double>(int_pow(n, k));
  return {k, n, std::move(c)};
}

DecayReport decay_fit(const CubeSpectrum& s) {
  const Index n = s.n;
  if (n < 2) throw PreconditionError("decay_fit: grid too small");
  std::vector<std::pair<long, double>> samples;
  samples.reserve(static_cast<std::size_t>(s.values.size()));
  std::vector<long> eta(static_cast<std::size_t>(s.k));
  for (Index idx = 1; idx < s.values.size(); ++idx) {
    decode(idx, n, eta);
    long radius = 0;
    for (long e : eta) radius = std::max(radius, abs_frequency(e, n));
    samples.emplace_back(radius, std::abs(s.values(idx)));
  }
  const double scale = std::max(std::abs(s.zero()), 1e-300);
  return fit_annuli(samples, 1e-12 * scale, s.k, static_cast<long>(n / 2));
}

NormRoute parse_route(const std::string& name) {
  if (name == "direct") return NormRoute::Direct;
  if (name == "fourier") return NormRoute::Fourier;
  throw PreconditionError("unknown route '" + name + "' (expected direct or fourier)");
}

UNorm u_norm(const ComplexArray& f, int k, NormRoute route, const ComputeBudget& budget) {
  const Index n = f.size();
  if (n < 1) throw PreconditionError("u_norm: empty density");
  if (k < 2) throw PreconditionError("u_norm: order must be at least 2");
  const double root = 1.0 / std::ldexp(1.0, k);
  UNorm out;

  if (route == NormRoute::Fourier) {
    const CubeSpectrum s = cube_spectrum(f, k - 1, budget);
    const RealArray sq = s.values.abs2();
    out.power = pairwise_sum(sq);
    out.value = std::pow(std::max(out.power.real(), 0.0), root);
    return out;
  }

  budget.check(cells_of(n, k + 1), k, "u_norm direct route");
  const Index cubes = int_pow(n, k);
  std::vector<Complex> per_u(static_cast<std::size_t>(cubes));
  std::vector<Complex> terms(static_cast<std::size_t>(n));
  std::vector<long> u(static_cast<std::size_t>(k));
  for (Index idx = 0; idx < cubes; ++idx) {
    decode(idx, n, u);
    for (Index x = 0; x < n; ++x) terms[static_cast<std::size_t>(x)] = cube_product(f, x, u);
    per_u[static_cast<std::size_t>(idx)] = pairwise_sum(std::span<const Complex>(terms));
  }
  out.power = pairwise_sum(std::span<const Complex>(per_u)) / static_cast<double>(cubes * n);
  out.non_real = std::abs(out.power.imag()) > 1e-10 * std::max(1.0, std::abs(out.power.real()));
  out.value = std::pow(std::abs(out.power), root);
  return out;
}

WeightFunction WeightFunction::ones(Index n) {
  if (n < 1) throw PreconditionError("WeightFunction: grid size must be positive");
  return {Eigen::ArrayXXcd::Ones(n, n)};
}

WeightFunction WeightFunction::monomial(Index n, long xi0, long eta0) {
  if (n < 1) throw PreconditionError("WeightFunction: grid size must be positive");
  Eigen::ArrayXXcd v(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index x = 0; x < n; ++x) {
      const Index phase = wrap(xi0 * static_cast<long>(x) + eta0 * static_cast<long>(r), n);
      v(x, r) = std::polar(1.0, 2.0 * kPi * static_cast<double>(phase) / static_cast<double>(n));
    }
  return {std::move(v)};
}

WeightFunction WeightFunction::dilation_only(const ComplexArray& gamma) {
  const Index n = gamma.size();
  if (n < 1) throw PreconditionError("WeightFunction: grid size must be positive");
  Eigen::ArrayXXcd v(n, n);
  for (Index r = 0; r < n; ++r) v.col(r).setConstant(gamma(r));
  return from_values(std::move(v));
}

WeightFunction WeightFunction::from_values(Eigen::ArrayXXcd values) {
  if (values.rows() != values.cols() || values.rows() < 1)
    throw PreconditionError("WeightFunction: values must be a nonempty square array");
  if (!values.isFinite().all()) throw PreconditionError("WeightFunction: values must be finite");
  return {std::move(values)};
}

WeightFunction WeightFunction::transposed() const { return {values.transpose()}; }

Complex WeightCubeSpectrum::at(long xi, std::span<const long> eta) const {
  if (static_cast<int>(eta.size()) != k) throw PreconditionError("WeightCubeSpectrum::at: wrong number of indices");
  Index flat = 0;
  for (int j = k - 1; j >= 0; --j) flat = flat * n + frequency_index(eta[static_cast<std::size_t>(j)], n);
  return values(frequency_index(xi, n) + n * flat);
}

double WeightCubeSpectrum::mixed_norm(double p) const {
  if (!(p >= 1.0)) throw PreconditionError("mixed_norm: p must be at least 1");
  const Index inner = values.size() / n;
  std::vector<double> per_xi(static_cast<std::size_t>(n));
  std::vector<double> terms(static_cast<std::size_t>(inner));
  for (Index xi = 0; xi < n; ++xi) {
    for (Index e = 0; e < inner; ++e) terms[static_cast<std::size_t>(e)] = std::abs(values(xi + n * e));
    if (std::isinf(p)) {
      per_xi[static_cast<std::size_t>(xi)] = *std::max_element(terms.begin(), terms.end());
      continue;
    }
    for (double& t : terms) t = std::pow(t, p);
    per_xi[static_cast<std::size_t>(xi)] = std::pow(pairwise_sum(std::span<const double>(terms)), 1.0 / p);
  }
  return pairwise_sum(std::span<const double>(per_xi));
}

WeightCubeSpectrum cube_weight_spectrum(const WeightFunction& g, int k, const ComputeBudget& budget) {
  const Index n = g.size();
  if (k < 0) throw PreconditionError("cube_weight_spectrum: order must be nonnegative");
  budget.check(cells_of(n, k + 2), k + 1, "cube_weight_spectrum");

  if (k == 0) {
    const ComplexArray mean_over_x = g.values.colwise().mean().transpose();
    return {0, n, dft(mean_over_x)};
  }

  const Index outer = int_pow(n, k - 1);
  ComplexArray c(n * outer * n);
  std::vector<long> u(static_cast<std::size_t>(k - 1));
  ComplexArray b(n);
  for (Index y = 0; y < n; ++y)
    for (Index idx = 0; idx < outer; ++idx) {
      decode(idx, n, u);
      for (Index x = 0; x < n; ++x) b(x) = weight_cube_product(g, x, y, u);
      // (1/n) sum_x b(x - t) conj(b(x)) equals the autocorrelation at t
      const ComplexArray corr = autocorrelation(b);
      for (Index t = 0; t < n; ++t) c(y + n * (idx + outer * t)) = corr(t);
    }
  fft_axes(c, n, k + 1);
  c /= static_cast<double>(int_pow(n, k + 1));
  return {k, n, std::move(c)};
}

Complex gowers_inner(const ComplexArray& f, const WeightFunction& g, int k, const ComputeBudget& budget,
                     std::span<const long> dilations) {
  if (f.size() != g.size()) throw PreconditionError("gowers_inner: density and weight grids differ");
  if (k < 1) throw PreconditionError("gowers_inner: order must be at least 1");
  const WeightCubeSpectrum weight = cube_weight_spectrum(g, k, budget);
  const CubeSpectrum cube = cube_spectrum(f, k, budget, dilations);
  const Index n = f.size();
  std::vector<Complex> terms(static_cast<std::size_t>(weight.values.size()));
  for (Index e = 0; e < cube.values.size(); ++e)
    for (Index xi = 0; xi < n; ++xi)
      terms[static_cast<std::size_t>(xi + n * e)] = weight.values(xi + n * e) * cube.values(e);
  return pairwise_sum(std::span<const Complex>(terms));
}

}  // namespace cubelab
