#include "cubelab/discrete_patterns.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "cubelab/config_count.hpp"

namespace cubelab {

LatticeSet::LatticeSet(int d, long n_side) : d_(d), n_side_(n_side) {
  if (d != 1 && d != 2) throw PreconditionError("LatticeSet: dimension must be 1 or 2");
  if (n_side < 1) throw PreconditionError("LatticeSet: side length must be positive");
  const long volume = d == 1 ? n_side : n_side * n_side;
  bits_.assign(static_cast<std::size_t>(volume), 0);
}

LatticeSet LatticeSet::from_indices(int d, long n_side, const std::vector<long>& indices) {
  LatticeSet s(d, n_side);
  for (long i : indices) {
    if (i < 0 || i >= s.volume()) throw PreconditionError("LatticeSet: member " + std::to_string(i) + " outside the box");
    auto& bit = s.bits_[static_cast<std::size_t>(i)];
    if (!bit) ++s.count_;
    bit = 1;
  }
  return s;
}

LatticeSet LatticeSet::from_points(int d, long n_side, const std::vector<std::vector<long>>& points) {
  std::vector<long> indices;
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != d) throw PreconditionError("LatticeSet: point has the wrong dimension");
    long index = 0;
    for (int c = d - 1; c >= 0; --c) {
      const long v = p[static_cast<std::size_t>(c)];
      if (v < 0 || v >= n_side) throw PreconditionError("LatticeSet: point outside the box");
      index = index * n_side + v;
    }
    indices.push_back(index);
  }
  return from_indices(d, n_side, indices);
}

LatticeSet LatticeSet::full(int d, long n_side) {
  LatticeSet s(d, n_side);
  std::fill(s.bits_.begin(), s.bits_.end(), std::uint8_t{1});
  s.count_ = s.volume();
  return s;
}

LatticeSet LatticeSet::random(int d, long n_side, double delta, std::uint64_t seed) {
  if (!(delta > 0.0 && delta <= 1.0)) throw PreconditionError("random set: delta must lie in (0, 1]");
  LatticeSet s(d, n_side);
  const auto size = static_cast<long>(std::ceil(delta * static_cast<double>(s.volume()) - 1e-9));
  Rng rng(seed);
  return from_indices(d, n_side, rng.sample(s.volume(), std::min(size, s.volume())));
}

std::vector<long> LatticeSet::indices() const {
  std::vector<long> out;
  out.reserve(static_cast<std::size_t>(count_));
  for (long i = 0; i < volume(); ++i)
    if (bits_[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

std::vector<std::vector<long>> LatticeSet::points() const {
  std::vector<std::vector<long>> out;
  for (long i : indices()) {
    if (d_ == 1)
      out.push_back({i});
    else
      out.push_back({i % n_side_, i / n_side_});
  }
  return out;
}

LatticeSet LatticeSet::with_index(long index) const {
  if (index < 0 || index >= volume()) throw PreconditionError("LatticeSet: index outside the box");
  LatticeSet s = *this;
  if (!s.bits_[static_cast<std::size_t>(index)]) ++s.count_;
  s.bits_[static_cast<std::size_t>(index)] = 1;
  return s;
}

LatticeSet LatticeSet::translated(const std::vector<long>& shift) const {
  if (static_cast<int>(shift.size()) != d_) throw PreconditionError("LatticeSet: shift has the wrong dimension");
  std::vector<std::vector<long>> moved;
  for (auto p : points()) {
    for (int c = 0; c < d_; ++c) {
      auto& v = p[static_cast<std::size_t>(c)];
      v = ((v + shift[static_cast<std::size_t>(c)]) % n_side_ + n_side_) % n_side_;
    }
    moved.push_back(std::move(p));
  }
  return from_points(d_, n_side_, moved);
}

ConfigTally count_configs(const LatticeSet& a, const VectorPattern& pattern, WrapMode mode) {
  if (pattern.d != a.dim()) throw PreconditionError("count_configs: pattern and set dimensions differ");
  const long n = a.side();
  const int d = a.dim();
  const int slots = pattern.k() + 1;
  ConfigTally tally;
  const std::vector<long> members = a.indices();
  std::vector<long> offsets(static_cast<std::size_t>(slots * d));
  for (long j = 1; j <= n; ++j) {
    for (int t = 0; t < slots; ++t) {
      const auto o = pattern.scaled_floor(t, j);
      for (int c = 0; c < d; ++c) {
        long v = o[static_cast<std::size_t>(c)];
        if (mode == WrapMode::Cyclic) v = ((v % n) + n) % n;
        offsets[static_cast<std::size_t>(t * d + c)] = v;
      }
    }
    bool trivial = true;
    for (int t = 1; t < slots && trivial; ++t)
      for (int c = 0; c < d; ++c)
        trivial = trivial && offsets[static_cast<std::size_t>(t * d + c)] == offsets[static_cast<std::size_t>(c)];
    if (!trivial) ++tally.nontrivial_dilations;

    // Anchor slot 0 on a member: i = member + offset_0 is a bijection onto
    // the box (cyclic) or onto the box points whose slot 0 stays inside.
    long long hits = 0;
    for (long member : members) {
      const long m0 = member % n, m1 = member / n;
      long i0 = m0 + offsets[0];
      long i1 = d == 2 ? m1 + offsets[1] : 0;
      if (mode == WrapMode::Cyclic) {
        if (i0 >= n) i0 -= n;
        if (i1 >= n) i1 -= n;
      } else if (i0 < 0 || i0 >= n || i1 < 0 || i1 >= n) {
        continue;
      }
      bool inside = true;
      for (int t = 1; t < slots && inside; ++t) {
        long p0 = i0 - offsets[static_cast<std::size_t>(t * d)];
        long p1 = d == 2 ? i1 - offsets[static_cast<std::size_t>(t * d + 1)] : 0;
        if (mode == WrapMode::Cyclic) {
          if (p0 < 0) p0 += n;
          if (p1 < 0) p1 += n;
        } else if (p0 < 0 || p0 >= n || p1 < 0 || p1 >= n) {
          inside = false;
          break;
        }
        inside = a.contains_index(p0 + n * p1);
      }
      hits += inside ? 1 : 0;
    }
    tally.total += hits;
    if (!trivial) tally.nontrivial += hits;
  }
  return tally;
}

double normalized_count(const ConfigTally& tally, const LatticeSet& a) {
  if (tally.nontrivial_dilations == 0) return 0.0;
  return static_cast<double>(tally.nontrivial) /
         (static_cast<double>(a.volume()) * static_cast<double>(tally.nontrivial_dilations));
}

namespace {

std::vector<long> digit_set(long n_side, long base, long max_digit) {
  std::vector<long> out;
  for (long x = 0; x < n_side; ++x) {
    bool ok = true;
    for (long y = x; y > 0 && ok; y /= base) ok = y % base <= max_digit;
    if (ok) out.push_back(x);
  }
  return out;
}

long digit_radius(long x, long base) {
  long radius = 0;
  for (long y = x; y > 0; y /= base) radius += (y % base) * (y % base);
  return radius;
}

/// Largest shell (smallest radius on ties) of the base-(2m-1) numbers with digits below m.
std::vector<long> sphere_set(long n_side, long m) {
  const long base = 2 * m - 1;
  const std::vector<long> candidates = digit_set(n_side, base, m - 1);
  std::vector<long> radii;
  radii.reserve(candidates.size());
  for (long x : candidates) radii.push_back(digit_radius(x, base));
  std::vector<long> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  long best = -1;
  std::ptrdiff_t best_size = 0;
  for (auto it = sorted.begin(); it != sorted.end();) {
    const auto next = std::upper_bound(it, sorted.end(), *it);
    if (next - it > best_size) {
      best_size = next - it;
      best = *it;
    }
    it = next;
  }
  std::vector<long> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (radii[i] == best) out.push_back(candidates[i]);
  return out;
}

}  // namespace

LatticeSet behrend(long n_side) {
  if (n_side < 1) throw PreconditionError("behrend: side length must be positive");
  std::vector<long> best = digit_set(n_side, 3, 1);
  for (long m = 3; 2 * m - 1 <= n_side; ++m) {
    // the lowest digit of a shell member is fixed by the others, so a shell
    // holds at most ceil(nSide / base) points
    const long base = 2 * m - 1;
    if ((n_side + base - 1) / base <= static_cast<long>(best.size())) continue;
    auto candidate = sphere_set(n_side, m);
    if (candidate.size() > best.size()) best = std::move(candidate);
  }
  return LatticeSet::from_indices(1, n_side, best);
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

VarnavidesResult varnavides_scan(long n_side, double delta, const VectorPattern& pattern, int trials,
                                 std::uint64_t seed, WrapMode mode, const LatticeSet* injected, unsigned threads) {
  if (trials < 1) throw PreconditionError("varnavides: need at least one trial");
  if (!(delta > 0.0 && delta <= 1.0)) throw PreconditionError("varnavides: delta must lie in (0, 1]");
  const double volume = std::pow(static_cast<double>(n_side), pattern.d);
  if (delta * volume < pattern.k() + 1)
    throw PreconditionError("varnavides: delta * nSide^d is below k + 1, too sparse to hold a configuration");

  VarnavidesResult result;
  result.delta = delta;
  result.trials = trials;
  result.per_trial.assign(static_cast<std::size_t>(trials), 0.0);
  auto run = [&](int t) {
    const LatticeSet a = LatticeSet::random(pattern.d, n_side, delta, mix_seed(seed, static_cast<std::uint64_t>(t)));
    result.per_trial[static_cast<std::size_t>(t)] = normalized_count(count_configs(a, pattern, mode), a);
  };
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(trials));
  if (threads <= 1) {
    for (int t = 0; t < trials; ++t) run(t);
  } else {
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < threads; ++w)
      workers.emplace_back([&, w] {
        for (int t = static_cast<int>(w); t < trials; t += static_cast<int>(threads)) run(t);
      });
    for (auto& worker : workers) worker.join();
  }

  std::vector<double> sorted = result.per_trial;
  std::sort(sorted.begin(), sorted.end());
  result.min_normalized_count = sorted.front();
  for (double q : {0.0, 0.05, 0.25, 0.5, 0.75, 0.95, 1.0}) result.distribution[q] = quantile(sorted, q);
  if (injected) {
    result.injected_count = normalized_count(count_configs(*injected, pattern, mode), *injected);
    result.injected_below_min = *result.injected_count < result.min_normalized_count;
  }
  return result;
}

long padding_constant(const VectorPattern& pattern) {
  return 2 * static_cast<long>(std::ceil(pattern.sup_norm_plus_one() - 1e-12));
}

StepDiscretization step_discretize(const RealArray& f, long blocks, const Pattern& pattern) {
  const Index n = f.size();
  if (blocks < 1 || n % blocks != 0) throw PreconditionError("step_discretize: N must divide the grid size");
  const long block = static_cast<long>(n) / blocks;
  if (block % pattern.denominator != 0)
    throw PreconditionError("step_discretize: the pattern denominator must divide the block size n/N");
  const double scale = std::max(1.0, f.abs().maxCoeff());
  for (Index x = 0; x < n; ++x)
    if (std::abs(f(x) - f(x - x % block)) > 1e-12 * scale)
      throw PreconditionError("step_discretize: density is not constant on blocks of size " + std::to_string(block));

  StepDiscretization out;
  out.blocks = blocks;
  out.pad = padding_constant(VectorPattern::from(pattern));
  const long span = out.pad * blocks;
  auto sample = [&](long cell) { return f(wrap(cell * block, n)); };
  out.lattice.resize(span);
  for (long j = 1; j <= span; ++j) out.lattice(j - 1) = sample(j);

  out.torus_lambda = lambda(nullptr, f, pattern).value.real();
  std::vector<double> block_rows, lattice_rows;
  std::vector<double> block_terms(static_cast<std::size_t>(span)), lattice_terms(static_cast<std::size_t>(span));
  for (long j = 1; j <= span; ++j) {
    for (long i = 1; i <= span; ++i) {
      double on_grid = 1.0, on_lattice = 1.0;
      for (long num : pattern.numerators) {
        on_grid *= f(wrap(i * block - j * block / pattern.denominator * num, n));
        on_lattice *= sample(i - floor_div(j * num, pattern.denominator));
      }
      block_terms[static_cast<std::size_t>(i - 1)] = on_grid;
      lattice_terms[static_cast<std::size_t>(i - 1)] = on_lattice;
    }
    block_rows.push_back(pairwise_sum(std::span<const double>(block_terms)));
    lattice_rows.push_back(pairwise_sum(std::span<const double>(lattice_terms)));
  }
  const double cells = static_cast<double>(span) * static_cast<double>(span);
  const double lattice_total = pairwise_sum(std::span<const double>(lattice_rows));
  out.block_sum = pairwise_sum(std::span<const double>(block_rows)) / cells;
  out.lattice_sum = lattice_total / cells;
  out.quarter_k_form = lattice_total / (4.0 * static_cast<double>(out.pad * out.pad) *
                                        static_cast<double>(blocks) * static_cast<double>(blocks));
  return out;
}

}  // namespace cubelab
