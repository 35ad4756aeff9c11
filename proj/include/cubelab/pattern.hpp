#pragma once

// Configuration patterns: k+1 rational points with a common denominator.

#include <string>
#include <vector>

namespace cubelab {

enum class WrapMode { Cyclic, Truncated };

WrapMode parse_wrap_mode(const std::string& name);
std::string wrap_mode_name(WrapMode mode);

/// floor(j * num / den) for den > 0, exact for negative products.
long floor_div(long num, long den);

/// Strictly increasing points b_t = numerators[t] / denominator on the line.
/// On a grid of size n the dilation index r shifts slot t by numerators[t]
/// cells, so r stands for the continuous dilation r * denominator / n.
struct Pattern {
  std::vector<long> numerators;
  long denominator = 1;

  static Pattern from_rationals(const std::vector<long>& nums, const std::vector<long>& dens);
  static Pattern integers(std::vector<long> points);
  /// "0,1,2" or "0,1/2,1".
  static Pattern parse(const std::string& text);

  int k() const { return static_cast<int>(numerators.size()) - 1; }
  double point(int t) const { return static_cast<double>(numerators[static_cast<std::size_t>(t)]) / denominator; }
  std::string to_string() const;
};

/// Points in Q^d (d = 1 or 2), pairwise distinct.
struct VectorPattern {
  int d = 1;
  /// numerators[t][c] / denominator is coordinate c of point t.
  std::vector<std::vector<long>> numerators;
  long denominator = 1;

  static VectorPattern from(const Pattern& p);
  /// "0,1,2" for d = 1, or "0:0,1:0,0:1" with ':' between coordinates.
  static VectorPattern parse(const std::string& text);

  int k() const { return static_cast<int>(numerators.size()) - 1; }
  /// floor(j * b_t) coordinatewise.
  std::vector<long> scaled_floor(int t, long j) const;
  /// sup over t of 1 + |b_t|_inf.
  double sup_norm_plus_one() const;
  std::string to_string() const;
};

}  // namespace cubelab
