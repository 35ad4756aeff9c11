#pragma once

// Shared numeric plumbing: array aliases, frequency indexing on Z_n,
// normalized DFTs, fixed-order summation, seeded random streams and
// log-log line fits.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cubelab/errors.hpp"

namespace cubelab {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using RealArray = Eigen::ArrayXd;
using ComplexArray = Eigen::ArrayXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Representative of i mod n in [-n/2, n/2).
inline long signed_frequency(Index i, Index n) {
  return i < (n + 1) / 2 ? static_cast<long>(i) : static_cast<long>(i - n);
}

inline Index frequency_index(long xi, Index n) {
  const long m = static_cast<long>(n);
  return static_cast<Index>(((xi % m) + m) % m);
}

inline long abs_frequency(Index i, Index n) {
  return static_cast<long>(std::min(i, n - i));
}

inline Index wrap(long x, Index n) { return frequency_index(x, n); }

/// Forward DFT with the 1/n normalization: out(xi) = (1/n) sum_x f(x) e^{-2 pi i x xi / n}.
ComplexArray dft(const ComplexArray& f);

/// Synthesis: out(x) = sum_xi c(xi) e^{+2 pi i x xi / n}. Inverse of dft().
ComplexArray synthesize(const ComplexArray& c);

/// Unnormalized forward transform along every axis of a flat n^dims tensor
/// (axis 0 fastest).
void fft_axes(ComplexArray& data, Index n, int dims, bool inverse = false);

/// Direct O(n^2) DFT, used as an independent check of the fast path.
ComplexArray dft_direct(const ComplexArray& f);

namespace detail {
template <typename T>
T pairwise_sum_impl(const T* data, std::size_t count) {
  if (count <= 32) {
    T acc{};
    for (std::size_t i = 0; i < count; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = count / 2;
  return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, count - half);
}
}  // namespace detail

/// Fixed-order tree summation; the result depends only on the input order.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  return values.empty() ? T{} : detail::pairwise_sum_impl(values.data(), values.size());
}

template <typename Derived>
typename Derived::Scalar pairwise_sum(const Eigen::DenseBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Array<Scalar, Eigen::Dynamic, 1> flat = values.derived();
  return pairwise_sum(std::span<const Scalar>(flat.data(), static_cast<std::size_t>(flat.size())));
}

/// splitmix64 finalizer; derives independent stream seeds from (seed, index).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded generator whose output is fully specified by the standard
/// (mt19937_64), with portable bounded-integer and unit-interval draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound), rejection-sampled (no modulo bias).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// `count` distinct values from [0, population), in draw order.
  std::vector<long> sample(long population, long count);

 private:
  std::mt19937_64 engine_;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Unweighted least squares y = slope * x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace cubelab
