#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "cubelab/gowers.hpp"
#include "test_helpers.hpp"

using namespace cubelab;
using fixtures::rel_err;

namespace {

/// Delta^k g(x,y;u) straight from the recursion, used as an oracle.
Complex weight_cube_recursive(const WeightFunction& g, long x, Index y, const std::vector<long>& u) {
  if (u.empty()) return g(wrap(x, g.size()), y);
  const std::vector<long> head(u.begin(), u.end() - 1);
  return weight_cube_recursive(g, x - u.back(), y, head) * std::conj(weight_cube_recursive(g, x, y, head));
}

/// Brute-force n^{-(k+1)} sum_{x,u} Delta^k f(x;u) e^{-2 pi i eta.u/n} at one eta.
Complex cube_spectrum_oracle(const ComplexArray& f, int k, const std::vector<long>& eta,
                             const std::vector<long>& dil = {}) {
  const Index n = f.size();
  const Index cubes = static_cast<Index>(std::pow(n, k));
  Complex total{};
  std::vector<long> u(static_cast<std::size_t>(k));
  for (Index idx = 0; idx < cubes; ++idx) {
    Index rest = idx;
    long phase = 0;
    for (int j = 0; j < k; ++j) {
      u[j] = rest % n;
      rest /= n;
      phase += eta[j] * u[j];
    }
    Complex inner{};
    for (Index x = 0; x < n; ++x) inner += cube_product(f, x, u, dil);
    total += inner * std::polar(1.0, -2.0 * kPi * static_cast<double>(wrap(phase, n)) / n);
  }
  return total / std::pow(static_cast<double>(n), k + 1);
}

}  // namespace

TEST(CubeProduct, Examples) {
  const RealArray one = RealArray::Ones(9);
  const std::vector<long> u{2, 5, 7};
  EXPECT_NEAR(std::abs(cube_product(one, 3, u) - 1.0), 0.0, 1e-15);

  Rng rng(1);
  const RealArray f = fixtures::random_density(9, rng);
  const std::vector<long> zero{0, 0, 0};
  EXPECT_NEAR(cube_product(f, 4, zero).real(), std::pow(f(4), 8), 1e-12);

  const Index n = 10;
  ComplexArray e(n);
  for (Index x = 0; x < n; ++x) e(x) = std::polar(1.0, 2.0 * kPi * x / n);
  const std::vector<long> step{1};
  for (Index x = 0; x < n; ++x) EXPECT_LT(std::abs(cube_product(e, x, step) - std::polar(1.0, -2.0 * kPi / n)), 1e-14);
}

TEST(CubeProduct, Recursion) {
  Rng rng(2);
  const ComplexArray f = fixtures::random_complex(7, rng);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<long> u{static_cast<long>(rng.below(7)), static_cast<long>(rng.below(7)),
                              static_cast<long>(rng.below(7))};
    const std::vector<long> head(u.begin(), u.end() - 1);
    const Index x = static_cast<Index>(rng.below(7));
    const Complex lhs = cube_product(f, x, u);
    const Complex rhs = cube_product(f, x, head) * std::conj(cube_product(f, wrap(x + u.back(), 7), head));
    EXPECT_LT(std::abs(lhs - rhs), 1e-13);
  }
}

TEST(CubeSpectrum, Examples) {
  const CubeSpectrum one = cube_spectrum(RealArray::Ones(16), 2);
  EXPECT_NEAR(one.values(0).real(), 1.0, 1e-14);
  EXPECT_LT(one.values.tail(one.values.size() - 1).abs().maxCoeff(), 1e-14);

  const Index n = 32;
  RealArray dirac = RealArray::Zero(n);
  dirac(0) = n;
  const CubeSpectrum d = cube_spectrum(dirac, 1);
  EXPECT_LT((d.values - Complex(1.0, 0.0)).abs().maxCoeff(), 1e-12);

  RealArray c(n);
  for (Index x = 0; x < n; ++x) c(x) = 1.0 + std::cos(2.0 * kPi * x / n);
  EXPECT_NEAR(cube_spectrum(c, 1).values.abs2().sum(), 1.125, 1e-12);
}

TEST(CubeSpectrum, MatchesBruteForce) {
  Rng rng(3);
  for (int k : {1, 2, 3}) {
    const Index n = k == 3 ? 4 : 6;
    const ComplexArray f = fixtures::random_complex(n, rng);
    const CubeSpectrum s = cube_spectrum(f, k);
    for (int probe = 0; probe < 10; ++probe) {
      std::vector<long> eta(static_cast<std::size_t>(k));
      for (auto& e : eta) e = static_cast<long>(rng.below(n)) - n / 2;
      EXPECT_LT(std::abs(s.at(eta) - cube_spectrum_oracle(f, k, eta)), 1e-12);
    }
  }
}

TEST(CubeSpectrum, DilationsMatchBruteForce) {
  Rng rng(4);
  const ComplexArray f = fixtures::random_complex(7, rng);
  const std::vector<long> dil{2, 1};
  const CubeSpectrum s = cube_spectrum(f, 2, {}, dil);
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b) {
      const std::vector<long> eta{a, b};
      EXPECT_LT(std::abs(s.at(eta) - cube_spectrum_oracle(f, 2, eta, dil)), 1e-12);
    }
}

TEST(CubeSpectrum, BudgetIsExplicit) {
  const RealArray f = RealArray::Ones(65);
  EXPECT_THROW(cube_spectrum(f, 2), BudgetError);
  EXPECT_NO_THROW(cube_spectrum(RealArray::Ones(64), 2));
  EXPECT_THROW(cube_spectrum(RealArray::Ones(33), 3), BudgetError);
  EXPECT_NO_THROW(cube_spectrum(f, 2, ComputeBudget{1e6}));
  try {
    cube_spectrum(f, 2);
  } catch (const BudgetError& e) {
    EXPECT_NE(std::string(e.what()).find("262144"), std::string::npos);
  }
}

TEST(UNorm, Examples) {
  for (int k : {2, 3})
    for (auto route : {NormRoute::Direct, NormRoute::Fourier})
      EXPECT_NEAR(u_norm(RealArray::Ones(8), k, route).value, 1.0, 1e-14);

  const Index n = 16;
  RealArray c(n);
  for (Index x = 0; x < n; ++x) c(x) = 1.0 + std::cos(2.0 * kPi * x / n);
  EXPECT_NEAR(u_norm(c, 2, NormRoute::Direct).value, std::pow(1.125, 0.25), 1e-12);
  EXPECT_NEAR(u_norm(c, 2, NormRoute::Fourier).value, std::pow(1.125, 0.25), 1e-12);
  EXPECT_NEAR(std::pow(1.125, 0.25), 1.029884, 1e-6);

  RealArray dirac = RealArray::Zero(n);
  dirac(0) = n;
  EXPECT_NEAR(u_norm(dirac, 2, NormRoute::Direct).value, std::pow(n, 0.25), 1e-12);
  EXPECT_NEAR(u_norm(dirac, 2, NormRoute::Fourier).value, std::pow(n, 0.25), 1e-12);
  EXPECT_THROW(u_norm(dirac, 1, NormRoute::Fourier), PreconditionError);
}

TEST(UNorm, RoutesAgreeOnComplexInput) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexArray f = fixtures::random_complex(12, rng);
    for (int k : {2, 3}) {
      const UNorm direct = u_norm(f, k, NormRoute::Direct);
      EXPECT_FALSE(direct.non_real);
      EXPECT_LT(rel_err(direct.value, u_norm(f, k, NormRoute::Fourier).value), 1e-10);
    }
  }
}

TEST(UNorm, NormAxiomsAndComparisons) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 16;
    const RealArray f = fixtures::random_density(n, rng), h = fixtures::random_signed(n, rng);
    for (int k : {2, 3}) {
      const double nf = u_norm(f, k, NormRoute::Fourier).value;
      const double nh = u_norm(h, k, NormRoute::Fourier).value;
      EXPECT_LE(u_norm(RealArray(f + h), k, NormRoute::Fourier).value, nf + nh + 1e-12);
      EXPECT_NEAR(u_norm(RealArray(-2.5 * h), k, NormRoute::Fourier).value, 2.5 * nh, 1e-12);
      const double lp = std::pow(h.abs().pow(std::ldexp(1.0, k)).mean(), 1.0 / std::ldexp(1.0, k));
      EXPECT_LE(nh, lp + 1e-12);
    }
    EXPECT_LE(u_norm(f, 2, NormRoute::Fourier).value, u_norm(f, 3, NormRoute::Fourier).value + 1e-12);
  }
}

TEST(WeightSpectrum, Ones) {
  const WeightCubeSpectrum s = cube_weight_spectrum(WeightFunction::ones(8), 2);
  EXPECT_NEAR(s.values(0).real(), 1.0, 1e-14);
  EXPECT_LT(s.values.tail(s.values.size() - 1).abs().maxCoeff(), 1e-14);
  EXPECT_NEAR(s.mixed_norm(1.5), 1.0, 1e-13);
}

TEST(WeightSpectrum, Monomials) {
  const Index n = 8;
  // order 0: the x-average keeps only xi0 = 0, leaving frequency eta0 in y
  const WeightCubeSpectrum zero = cube_weight_spectrum(WeightFunction::monomial(n, 0, 3), 0);
  EXPECT_NEAR(std::abs(zero.at(3, {}) - 1.0), 0.0, 1e-13);
  EXPECT_NEAR(zero.values.abs().sum(), 1.0, 1e-13);
  EXPECT_LT(cube_weight_spectrum(WeightFunction::monomial(n, 2, 3), 0).values.abs().maxCoeff(), 1e-13);

  // order 1: Delta g = e^{-2 pi i xi0 u/n}, one unit entry at (0; -xi0);
  // order 2 differences the linear phase away, leaving the entry at (0; 0, 0)
  for (int k : {1, 2}) {
    const WeightCubeSpectrum s = cube_weight_spectrum(WeightFunction::monomial(n, 2, 3), k);
    std::vector<long> eta(static_cast<std::size_t>(k), 0L);
    if (k == 1) eta[0] = -2;
    EXPECT_NEAR(std::abs(s.at(0, eta)), 1.0, 1e-12);
    EXPECT_NEAR(s.values.abs().sum(), 1.0, 1e-12);
    EXPECT_NEAR(s.mixed_norm(1.0), 1.0, 1e-12);
  }
}

TEST(WeightSpectrum, RandomSignMatchesBruteForce) {
  const Index n = 8;
  Rng rng(7);
  Eigen::ArrayXXcd v(n, n);
  for (Index i = 0; i < n * n; ++i) v(i) = rng.below(2) ? 1.0 : -1.0;
  const WeightFunction g = WeightFunction::from_values(v);
  const WeightCubeSpectrum s = cube_weight_spectrum(g, 1);

  Eigen::ArrayXXcd oracle = Eigen::ArrayXXcd::Zero(n, n);  // (xi, eta)
  for (Index xi = 0; xi < n; ++xi)
    for (Index eta = 0; eta < n; ++eta) {
      Complex total{};
      for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y)
          for (Index u = 0; u < n; ++u)
            total += weight_cube_recursive(g, x, y, {static_cast<long>(u)}) *
                     std::polar(1.0, -2.0 * kPi * static_cast<double>((xi * y + eta * u) % n) / n);
      oracle(xi, eta) = total / std::pow(static_cast<double>(n), 3);
    }
  for (Index xi = 0; xi < n; ++xi)
    for (Index eta = 0; eta < n; ++eta) EXPECT_LT(std::abs(s.values(xi + n * eta) - oracle(xi, eta)), 1e-12);

  for (double p : {1.0, 1.5, 2.0}) {
    double mixed = 0.0;
    for (Index xi = 0; xi < n; ++xi) mixed += std::pow(oracle.row(xi).abs().pow(p).sum(), 1.0 / p);
    EXPECT_LT(rel_err(s.mixed_norm(p), mixed), 1e-12);
  }
}

TEST(GowersInner, Examples) {
  Rng rng(8);
  const Index n = 8;
  const RealArray f = fixtures::random_density(n, rng);
  const Complex with_ones = gowers_inner(f, WeightFunction::ones(n), 2);
  EXPECT_LT(std::abs(with_ones - std::pow(u_norm(f, 2, NormRoute::Fourier).value, 4)), 1e-12);

  // f = 1 selects eta = 0, i.e. sum over xi of G(xi; 0)
  Eigen::ArrayXXcd v(n, n);
  for (Index i = 0; i < n * n; ++i) v(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  const WeightFunction g = WeightFunction::from_values(v);
  const WeightCubeSpectrum gs = cube_weight_spectrum(g, 2);
  Complex column{};
  for (long xi = 0; xi < n; ++xi) column += gs.at(xi, std::vector<long>{0, 0});
  EXPECT_LT(std::abs(gowers_inner(RealArray::Ones(n), g, 2) - column), 1e-12);

  // for weights independent of y that is the single entry G(0; 0)
  ComplexArray gamma = fixtures::random_complex(n, rng);
  const WeightFunction gx = WeightFunction::dilation_only(gamma).transposed();
  EXPECT_LT(std::abs(gowers_inner(RealArray::Ones(n), gx, 2) -
                     cube_weight_spectrum(gx, 2).at(0, std::vector<long>{0, 0})),
            1e-12);
}

TEST(GowersInner, MatchesConfigurationSpace) {
  Rng rng(9);
  const Index n = 6;
  for (int k : {1, 2}) {
    const ComplexArray f = fixtures::random_complex(n, rng);
    Eigen::ArrayXXcd v(n, n);
    for (Index i = 0; i < n * n; ++i) v(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const WeightFunction g = WeightFunction::from_values(v);
    // n^{-(k+2)} sum_{x, x', u} Delta^k g(x, 0; u) Delta^k f(x'; -u)
    const Index cubes = static_cast<Index>(std::pow(n, k));
    Complex total{};
    std::vector<long> u(static_cast<std::size_t>(k)), minus(static_cast<std::size_t>(k));
    for (Index idx = 0; idx < cubes; ++idx) {
      Index rest = idx;
      for (int j = 0; j < k; ++j) {
        u[j] = rest % n;
        minus[j] = -u[j];
        rest /= n;
      }
      Complex gs{}, fs{};
      for (Index x = 0; x < n; ++x) {
        gs += weight_cube_recursive(g, x, 0, u);
        fs += cube_product(f, x, minus);
      }
      total += gs * fs;
    }
    total /= std::pow(static_cast<double>(n), k + 2);
    EXPECT_LT(std::abs(gowers_inner(f, g, k) - total), 1e-12);
  }
}
