#pragma once

// Integer-lattice counterparts on [0, nSide)^d, d in {1, 2}: exact
// configuration counts, Behrend-type 3-AP-free sets, random-subset
// Varnavides scans, and the step discretization of torus densities.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cubelab/numeric.hpp"
#include "cubelab/pattern.hpp"

namespace cubelab {

class LatticeSet {
 public:
  /// Points are coordinate vectors of length d; duplicates are merged.
  static LatticeSet from_points(int d, long n_side, const std::vector<std::vector<long>>& points);
  /// Linear indices x_0 + n_side * x_1.
  static LatticeSet from_indices(int d, long n_side, const std::vector<long>& indices);
  static LatticeSet full(int d, long n_side);
  /// Exactly ceil(delta * n_side^d) points, uniform without replacement. With a
  /// shared seed a smaller delta gives a subset of a larger one.
  static LatticeSet random(int d, long n_side, double delta, std::uint64_t seed);

  int dim() const { return d_; }
  long side() const { return n_side_; }
  long volume() const { return static_cast<long>(bits_.size()); }
  long count() const { return count_; }
  double density() const { return static_cast<double>(count_) / static_cast<double>(volume()); }
  bool contains_index(long index) const { return bits_[static_cast<std::size_t>(index)] != 0; }
  /// Sorted linear indices.
  std::vector<long> indices() const;
  std::vector<std::vector<long>> points() const;

  LatticeSet with_index(long index) const;
  /// Cyclic translation by `shift` (one entry per coordinate).
  LatticeSet translated(const std::vector<long>& shift) const;

 private:
  LatticeSet(int d, long n_side);

  int d_ = 1;
  long n_side_ = 0;
  long count_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct ConfigTally {
  long long total = 0;
  /// Excludes configurations whose points all coincide.
  long long nontrivial = 0;
  /// Number of j in [1, nSide] whose offsets floor(j b_t) are not all equal.
  long nontrivial_dilations = 0;
};

/// Pairs (i, j), i in the box and j in [1, nSide], with every i - floor(j b_t) in A.
ConfigTally count_configs(const LatticeSet& a, const VectorPattern& pattern, WrapMode mode);

/// Nontrivial count / (nSide^d * nontrivial dilations); the full set gives 1 in cyclic mode.
double normalized_count(const ConfigTally& tally, const LatticeSet& a);

/// 3-AP-free subset of [0, nSide): the larger of the base-3 {0,1}-digit set
/// and the best digit-sphere set in base 2m-1 with digits below m.
LatticeSet behrend(long n_side);

struct VarnavidesResult {
  double delta = 0.0;
  int trials = 0;
  double min_normalized_count = 0.0;
  /// Linearly interpolated quantiles at 0, 0.05, 0.25, 0.5, 0.75, 0.95, 1.
  std::map<double, double> distribution;
  std::vector<double> per_trial;
  /// Optional control set scored against the ensemble.
  std::optional<double> injected_count;
  bool injected_below_min = false;
};

/// Trial t draws its set from mix_seed(seed, t); trials run on `threads` workers
/// (0 = hardware concurrency) with results stored by trial index.
VarnavidesResult varnavides_scan(long n_side, double delta, const VectorPattern& pattern, int trials,
                                 std::uint64_t seed, WrapMode mode = WrapMode::Cyclic,
                                 const LatticeSet* injected = nullptr, unsigned threads = 0);

struct StepDiscretization {
  long blocks = 0;  // N
  long pad = 0;     // K = 2 ceil(sup_t (1 + |b_t|))
  /// F(j) = f(j n / N) for j = 1..KN, periodic in j with period N.
  RealArray lattice;
  /// n^{-2} sum_{x,r} prod_t f(x - c_t r) on the torus.
  double torus_lambda = 0.0;
  /// (KN)^{-2} sum_{i,j in [1,KN]} prod_t f(iB - j B b_t), B = n/N.
  double block_sum = 0.0;
  /// (KN)^{-2} sum_{i,j in [1,KN]} prod_t F(i - floor(j b_t)).
  double lattice_sum = 0.0;
  /// (1/(4K^2)) N^{-2} sum_{i,j in [1,KN]} prod_t F(i - floor(j b_t)), reported only.
  double quarter_k_form = 0.0;
};

/// Requires f constant on the N blocks of size n/N and q | n/N for the pattern denominator q.
StepDiscretization step_discretize(const RealArray& f, long blocks, const Pattern& pattern);

/// K = 2 ceil(sup_t (1 + |b_t|)).
long padding_constant(const VectorPattern& pattern);

}  // namespace cubelab
