#include <gtest/gtest.h>

#include <set>

#include "cubelab/numeric.hpp"
#include "test_helpers.hpp"

using namespace cubelab;

TEST(Frequency, SignedRepresentatives) {
  EXPECT_EQ(signed_frequency(0, 8), 0);
  EXPECT_EQ(signed_frequency(3, 8), 3);
  EXPECT_EQ(signed_frequency(4, 8), -4);
  EXPECT_EQ(signed_frequency(7, 8), -1);
  EXPECT_EQ(signed_frequency(4, 9), 4);
  EXPECT_EQ(signed_frequency(5, 9), -4);
  EXPECT_EQ(frequency_index(-1, 9), 8);
  EXPECT_EQ(frequency_index(-10, 9), 8);
  EXPECT_EQ(abs_frequency(7, 8), 1);
}

class DftSizes : public ::testing::TestWithParam<Index> {};

TEST_P(DftSizes, FastMatchesDirect) {
  Rng rng(GetParam());
  const ComplexArray f = fixtures::random_complex(GetParam(), rng);
  const ComplexArray fast = dft(f), slow = dft_direct(f);
  EXPECT_LT((fast - slow).abs().maxCoeff(), 1e-13);
  EXPECT_LT((synthesize(fast) - f).abs().maxCoeff(), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Composite, DftSizes, ::testing::Values(1, 2, 3, 7, 12, 27, 81, 100, 243, 256, 729));

TEST(FftAxes, MatchesSeparableDirectTransform) {
  const Index n = 6;
  Rng rng(3);
  ComplexArray data = fixtures::random_complex(n * n, rng);
  ComplexArray expected(n * n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      Complex s{};
      for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y)
          s += data(x + n * y) * std::polar(1.0, -2.0 * kPi * static_cast<double>(a * x + b * y) / n);
      expected(a + n * b) = s;
    }
  fft_axes(data, n, 2);
  EXPECT_LT((data - expected).abs().maxCoeff(), 1e-11);
}

TEST(PairwiseSum, OrderFixedAndAccurate) {
  std::vector<double> v(1000, 0.1);
  EXPECT_NEAR(pairwise_sum(std::span<const double>(v)), 100.0, 1e-12);
  EXPECT_EQ(pairwise_sum(std::span<const double>()), 0.0);
}

TEST(Rng, DeterministicAndBounded) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(c.below(13), 13u);
    const double u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, SampleDistinctAndPrefixStable) {
  Rng a(5), b(5);
  const auto small = a.sample(100, 10);
  const auto large = b.sample(100, 40);
  EXPECT_EQ(std::set<long>(small.begin(), small.end()).size(), 10u);
  EXPECT_TRUE(std::equal(small.begin(), small.end(), large.begin()));
  EXPECT_THROW(a.sample(3, 4), PreconditionError);
}

TEST(MixSeed, StreamsDiffer) {
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
  EXPECT_EQ(mix_seed(9, 4), mix_seed(9, 4));
}

TEST(FitLine, ExactLine) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const LineFit fit = fit_line(x, y);
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-12);
  EXPECT_THROW(fit_line(std::vector<double>{1}, std::vector<double>{1}), PreconditionError);
}
