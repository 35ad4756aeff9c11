#include "cubelab/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "cubelab/errors.hpp"

namespace cubelab {

WrapMode parse_wrap_mode(const std::string& name) {
  if (name == "cyclic") return WrapMode::Cyclic;
  if (name == "truncated") return WrapMode::Truncated;
  throw PreconditionError("unknown mode '" + name + "' (expected cyclic or truncated)");
}

std::string wrap_mode_name(WrapMode mode) { return mode == WrapMode::Cyclic ? "cyclic" : "truncated"; }

long floor_div(long num, long den) {
  long q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

namespace {

struct Rational {
  long num = 0;
  long den = 1;
};

Rational parse_rational(const std::string& token) {
  if (token.empty()) throw PreconditionError("pattern: empty entry");
  std::size_t used = 0;
  Rational r;
  try {
    const auto slash = token.find('/');
    r.num = std::stol(token.substr(0, slash), &used);
    if (used != token.substr(0, slash).size()) throw PreconditionError("");
    if (slash != std::string::npos) {
      const std::string den = token.substr(slash + 1);
      r.den = std::stol(den, &used);
      if (used != den.size()) throw PreconditionError("");
    }
  } catch (const std::exception&) {
    throw PreconditionError("pattern: cannot parse '" + token + "' as an integer or p/q");
  }
  if (r.den <= 0) throw PreconditionError("pattern: denominators must be positive in '" + token + "'");
  return r;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

/// Common denominator and rescaled numerators.
std::pair<std::vector<long>, long> common(const std::vector<Rational>& values) {
  long q = 1;
  for (const auto& v : values) q = std::lcm(q, v.den);
  std::vector<long> nums;
  for (const auto& v : values) nums.push_back(v.num * (q / v.den));
  // reduce by the common gcd so the denominator is minimal
  long g = q;
  for (long p : nums) g = std::gcd(g, p);
  if (g > 1) {
    for (long& p : nums) p /= g;
    q /= g;
  }
  return {nums, q};
}

}  // namespace

Pattern Pattern::from_rationals(const std::vector<long>& nums, const std::vector<long>& dens) {
  if (nums.size() != dens.size()) throw PreconditionError("pattern: numerator and denominator counts differ");
  std::vector<Rational> values;
  for (std::size_t i = 0; i < nums.size(); ++i) {
    if (dens[i] <= 0) throw PreconditionError("pattern: denominators must be positive");
    values.push_back({nums[i], dens[i]});
  }
  auto [scaled, q] = common(values);
  if (scaled.size() < 2) throw PreconditionError("pattern: need at least two points");
  for (std::size_t i = 1; i < scaled.size(); ++i)
    if (scaled[i] <= scaled[i - 1]) throw PreconditionError("pattern: points must be strictly increasing");
  return {std::move(scaled), q};
}

Pattern Pattern::integers(std::vector<long> points) {
  return from_rationals(points, std::vector<long>(points.size(), 1L));
}

Pattern Pattern::parse(const std::string& text) {
  std::vector<long> nums, dens;
  for (const auto& token : split(text, ',')) {
    const Rational r = parse_rational(token);
    nums.push_back(r.num);
    dens.push_back(r.den);
  }
  return from_rationals(nums, dens);
}

std::string Pattern::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < numerators.size(); ++i) {
    if (i) out << ',';
    const long g = std::gcd(numerators[i], denominator);
    out << numerators[i] / g;
    if (denominator / g != 1) out << '/' << denominator / g;
  }
  return out.str();
}

VectorPattern VectorPattern::from(const Pattern& p) {
  VectorPattern v;
  v.d = 1;
  for (long num : p.numerators) v.numerators.push_back({num});
  v.denominator = p.denominator;
  return v;
}

VectorPattern VectorPattern::parse(const std::string& text) {
  std::vector<std::vector<Rational>> points;
  for (const auto& token : split(text, ',')) {
    std::vector<Rational> coords;
    for (const auto& c : split(token, ':')) coords.push_back(parse_rational(c));
    points.push_back(std::move(coords));
  }
  if (points.size() < 2) throw PreconditionError("pattern: need at least two points");
  const auto d = points.front().size();
  if (d < 1 || d > 2) throw PreconditionError("pattern: dimension must be 1 or 2");
  std::vector<Rational> flat;
  for (const auto& p : points) {
    if (p.size() != d) throw PreconditionError("pattern: points have different dimensions");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  auto [scaled, q] = common(flat);
  VectorPattern v;
  v.d = static_cast<int>(d);
  v.denominator = q;
  for (std::size_t t = 0; t < points.size(); ++t)
    v.numerators.emplace_back(scaled.begin() + static_cast<long>(t * d), scaled.begin() + static_cast<long>((t + 1) * d));
  const std::set<std::vector<long>> distinct(v.numerators.begin(), v.numerators.end());
  if (distinct.size() != v.numerators.size()) throw PreconditionError("pattern: points must be pairwise distinct");
  return v;
}

std::vector<long> VectorPattern::scaled_floor(int t, long j) const {
  std::vector<long> out;
  for (long num : numerators[static_cast<std::size_t>(t)]) out.push_back(floor_div(j * num, denominator));
  return out;
}

double VectorPattern::sup_norm_plus_one() const {
  double best = 0.0;
  for (const auto& point : numerators)
    for (long num : point) best = std::max(best, 1.0 + std::abs(static_cast<double>(num) / denominator));
  return best;
}

std::string VectorPattern::to_string() const {
  std::ostringstream out;
  for (std::size_t t = 0; t < numerators.size(); ++t) {
    if (t) out << ',';
    for (int c = 0; c < d; ++c) {
      if (c) out << ':';
      const long num = numerators[t][static_cast<std::size_t>(c)];
      const long g = std::gcd(num, denominator);
      out << num / g;
      if (denominator / g != 1) out << '/' << denominator / g;
    }
  }
  return out.str();
}

}  // namespace cubelab
