#pragma once

// Cube products, cube spectra and U^k norms on Z_n, with the weighted
// cube spectrum and the Fourier-side inner product between a density and
// a two-variable weight.
//
// Conventions: odd cube vertices are conjugated, every variable carries a
// 1/n normalization, and k-dimensional arrays are flat with axis 0 fastest.

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cubelab/numeric.hpp"
#include "cubelab/torus_measure.hpp"

namespace cubelab {

/// Explicit limit on the tensor work of the cube routines. Cell counts are
/// n^{k+1} for an order-k cube spectrum; unset means the per-order default.
struct ComputeBudget {
  std::optional<double> max_cells;

  static double default_limit(int order);
  double limit(int order) const { return max_cells ? *max_cells : default_limit(order); }
  /// Throws BudgetError quoting the requested cell count against the limit.
  void check(double cells, int order, const std::string& what) const;
};

/// Delta^k f(x; u) = prod over iota in {0,1}^k of C^{|iota|} f(x + sum_j iota_j d_j u_j)
/// with C conjugation; `dilations` defaults to all ones.
template <typename Derived>
Complex cube_product(const Eigen::DenseBase<Derived>& f, Index x, std::span<const long> u,
                     std::span<const long> dilations = {}) {
  const Index n = f.size();
  const auto k = u.size();
  Complex product{1.0, 0.0};
  for (unsigned long iota = 0; iota < (1UL << k); ++iota) {
    long offset = static_cast<long>(x);
    int weight = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (!(iota >> j & 1UL)) continue;
      offset += (dilations.empty() ? 1L : dilations[j]) * u[j];
      ++weight;
    }
    const Complex value = f(wrap(offset, n));
    product *= (weight & 1) ? std::conj(value) : value;
  }
  return product;
}

struct CubeSpectrum {
  int k = 0;
  Index n = 0;
  /// n^k values in DFT order on every axis, eta_1 fastest.
  ComplexArray values;

  Complex at(std::span<const long> eta) const;
  Complex zero() const { return values(0); }
};

/// values[eta] = n^{-(k+1)} sum_{x,u} Delta^k f(x;u) e^{-2 pi i eta.u/n}.
CubeSpectrum cube_spectrum(const ComplexArray& f, int k, const ComputeBudget& budget = {},
                           std::span<const long> dilations = {});
template <typename Derived>
CubeSpectrum cube_spectrum(const Eigen::ArrayBase<Derived>& f, int k, const ComputeBudget& budget = {},
                           std::span<const long> dilations = {}) {
  const ComplexArray c = f.template cast<Complex>();
  return cube_spectrum(c, k, budget, dilations);
}

/// Order-k fit over sup-norm annuli of eta; see decay_fit(Spectrum).
DecayReport decay_fit(const CubeSpectrum& s);

enum class NormRoute { Direct, Fourier };
NormRoute parse_route(const std::string& name);

struct UNorm {
  double value = 0.0;
  /// The cube mean (direct) or the Fourier sum before taking the 2^k-th root.
  Complex power{0.0, 0.0};
  /// The direct cube mean came out non-real; value is the root of its modulus.
  bool non_real = false;
};

UNorm u_norm(const ComplexArray& f, int k, NormRoute route, const ComputeBudget& budget = {});
template <typename Derived>
UNorm u_norm(const Eigen::ArrayBase<Derived>& f, int k, NormRoute route, const ComputeBudget& budget = {}) {
  const ComplexArray c = f.template cast<Complex>();
  return u_norm(c, k, route, budget);
}

/// Bounded weight g(x, r) on Z_n x Z_n.
struct WeightFunction {
  Eigen::ArrayXXcd values;

  Index size() const { return values.rows(); }
  Complex operator()(Index x, Index r) const { return values(x, r); }

  static WeightFunction ones(Index n);
  /// g(x, r) = e^{2 pi i (xi0 x + eta0 r)/n}.
  static WeightFunction monomial(Index n, long xi0, long eta0);
  /// g(x, r) = gamma(r).
  static WeightFunction dilation_only(const ComplexArray& gamma);
  static WeightFunction from_values(Eigen::ArrayXXcd values);
  WeightFunction transposed() const;
};

/// G(xi; eta) for Delta^k g(x,y;u) = Delta^{k-1}g(x-u_k,y;u') conj(Delta^{k-1}g(x,y;u')),
/// averaged over x, transformed over y at xi and over u at eta. Flat layout
/// xi fastest, then eta_1 ... eta_k.
struct WeightCubeSpectrum {
  int k = 0;
  Index n = 0;
  ComplexArray values;

  Complex at(long xi, std::span<const long> eta) const;
  /// sum over xi of (sum over eta of |G(xi;eta)|^p)^{1/p}; p = infinity allowed.
  double mixed_norm(double p) const;
};

WeightCubeSpectrum cube_weight_spectrum(const WeightFunction& g, int k, const ComputeBudget& budget = {});

/// sum_{xi,eta} G(xi;eta) F(eta) with F the order-k cube spectrum of f taken
/// at the given dilations.
Complex gowers_inner(const ComplexArray& f, const WeightFunction& g, int k, const ComputeBudget& budget = {},
                     std::span<const long> dilations = {});
template <typename Derived>
Complex gowers_inner(const Eigen::ArrayBase<Derived>& f, const WeightFunction& g, int k,
                     const ComputeBudget& budget = {}, std::span<const long> dilations = {}) {
  const ComplexArray c = f.template cast<Complex>();
  return gowers_inner(c, g, k, budget, dilations);
}

}  // namespace cubelab
