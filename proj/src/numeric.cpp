#include "cubelab/numeric.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cubelab {

namespace {

void transform_line(Eigen::FFT<double>& engine, std::vector<Complex>& in, std::vector<Complex>& out,
                    bool inverse) {
  const auto n = static_cast<Index>(in.size());
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  engine.SetFlag(Eigen::FFT<double>::Unscaled);
  if (inverse)
    engine.inv(out.data(), in.data(), n);
  else
    engine.fwd(out.data(), in.data(), n);
}

}  // namespace

ComplexArray dft(const ComplexArray& f) {
  const Index n = f.size();
  if (n == 0) return {};
  std::vector<Complex> in(f.data(), f.data() + n), out(static_cast<std::size_t>(n));
  Eigen::FFT<double> engine;
  transform_line(engine, in, out, false);
  ComplexArray result = Eigen::Map<const ComplexArray>(out.data(), n);
  return result / static_cast<double>(n);
}

ComplexArray synthesize(const ComplexArray& c) {
  const Index n = c.size();
  if (n == 0) return {};
  std::vector<Complex> in(c.data(), c.data() + n), out(static_cast<std::size_t>(n));
  Eigen::FFT<double> engine;
  // unscaled inverse: sum_xi c(xi) e^{+2 pi i x xi / n}
  transform_line(engine, in, out, true);
  return Eigen::Map<const ComplexArray>(out.data(), n);
}

void fft_axes(ComplexArray& data, Index n, int dims, bool inverse) {
  if (dims == 0) return;
  Index stride = 1;
  const Index total = data.size();
  Eigen::FFT<double> engine;
  std::vector<Complex> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  for (int axis = 0; axis < dims; ++axis) {
    const Index block = stride * n;
    for (Index base = 0; base < total; base += block) {
      for (Index offset = 0; offset < stride; ++offset) {
        for (Index i = 0; i < n; ++i) in[static_cast<std::size_t>(i)] = data(base + offset + i * stride);
        transform_line(engine, in, out, inverse);
        for (Index i = 0; i < n; ++i) data(base + offset + i * stride) = out[static_cast<std::size_t>(i)];
      }
    }
    stride = block;
  }
}

ComplexArray dft_direct(const ComplexArray& f) {
  const Index n = f.size();
  ComplexArray out(n);
  for (Index xi = 0; xi < n; ++xi) {
    std::vector<Complex> terms(static_cast<std::size_t>(n));
    for (Index x = 0; x < n; ++x) {
      const double phase = -2.0 * kPi * static_cast<double>((x * xi) % n) / static_cast<double>(n);
      terms[static_cast<std::size_t>(x)] = f(x) * std::polar(1.0, phase);
    }
    out(xi) = pairwise_sum(std::span<const Complex>(terms)) / static_cast<double>(n);
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw PreconditionError("Rng::below: bound must be positive");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t draw = next();
  while (draw >= limit) draw = next();
  return draw % bound;
}

std::vector<long> Rng::sample(long population, long count) {
  if (count < 0 || count > population) throw PreconditionError("Rng::sample: count outside [0, population]");
  std::vector<long> pool(static_cast<std::size_t>(population));
  std::iota(pool.begin(), pool.end(), 0L);
  for (long i = 0; i < count; ++i) {
    const auto j = i + static_cast<long>(below(static_cast<std::uint64_t>(population - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("fit_line: x and y differ in length");
  if (x.size() < 2) throw PreconditionError("fit_line: need at least two points");
  const auto m = static_cast<Index>(x.size());
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd rhs(m);
  for (Index i = 0; i < m; ++i) {
    design(i, 0) = x[static_cast<std::size_t>(i)];
    design(i, 1) = 1.0;
    rhs(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  return {coef(0), coef(1), x.size()};
}

}  // namespace cubelab
