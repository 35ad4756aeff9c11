#include "cubelab/mollify.hpp"

#include <algorithm>
#include <cmath>

namespace cubelab {

Taper parse_taper(const std::string& name) {
  if (name == "raised-cosine") return Taper::RaisedCosine;
  throw PreconditionError("unknown taper '" + name + "' (supported: raised-cosine)");
}

std::string taper_name(Taper) { return "raised-cosine"; }

MollifierLadder::MollifierLadder(Index n, Taper taper) : n_(n), taper_(taper) {
  if (n < 1) throw PreconditionError("MollifierLadder: grid size must be positive");
}

bool MollifierLadder::saturated(int level) const {
  if (level < 0) throw PreconditionError("mollify: level must be nonnegative");
  if (level >= 62) return true;
  return 2.0 * std::ldexp(2.0, level) >= static_cast<double>(n_);
}

int MollifierLadder::max_unsaturated_level() const {
  int level = -1;
  while (!saturated(level + 1)) ++level;
  return level;
}

double MollifierLadder::value(int level, long xi) const {
  if (saturated(level)) return 1.0;
  const double a = static_cast<double>(std::abs(xi));
  const double plateau = std::ldexp(1.0, level);
  if (a <= plateau) return 1.0;
  if (a >= 2.0 * plateau) return 0.0;
  return 0.5 * (1.0 + std::cos(kPi * (a - plateau) / plateau));
}

RealArray MollifierLadder::multiplier(int level) const {
  RealArray m(n_);
  for (Index i = 0; i < n_; ++i) m(i) = value(level, signed_frequency(i, n_));
  return m;
}

namespace {

double negative_part(const RealArray& d) { return d.size() ? std::max(0.0, -d.minCoeff()) : 0.0; }

}  // namespace

MollifiedDensity mollify(const RealArray& density, int level, Taper taper) {
  const MollifierLadder ladder(density.size(), taper);
  MollifiedDensity out;
  out.level = level;
  out.saturated = ladder.saturated(level);
  if (out.saturated) {
    out.density = density;
  } else {
    const ComplexArray spectrum = dft(density.cast<Complex>()) * ladder.multiplier(level).cast<Complex>();
    out.density = synthesize(spectrum).real();
  }
  out.negative_part = negative_part(out.density);
  return out;
}

MollifiedDensity ladder_diff(const RealArray& density, int level, Taper taper) {
  const MollifierLadder ladder(density.size(), taper);
  MollifiedDensity out;
  out.level = level;
  out.saturated = ladder.saturated(level) || ladder.saturated(level + 1);
  if (out.saturated) {
    out.density = RealArray::Zero(density.size());
    return out;
  }
  const RealArray band = ladder.multiplier(level + 1) - ladder.multiplier(level);
  const ComplexArray spectrum = dft(density.cast<Complex>()) * band.cast<Complex>();
  out.density = synthesize(spectrum).real();
  out.negative_part = negative_part(out.density);
  return out;
}

RealArray mollifier_kernel(Index n, int level, Taper taper) {
  return synthesize(MollifierLadder(n, taper).multiplier(level).cast<Complex>()).real();
}

std::vector<std::pair<Index, double>> kernel_tail(Index n, int level, Taper taper) {
  const RealArray kernel = mollifier_kernel(n, level, taper);
  std::vector<std::pair<Index, double>> tail;
  for (Index d = 0; 2 * d < n; d = d ? 2 * d : 1) {
    double sum = 0.0;
    for (Index x = 0; x < n; ++x)
      if (abs_frequency(x, n) > d) sum += std::abs(kernel(x));
    tail.emplace_back(d, sum / static_cast<double>(n));
  }
  return tail;
}

}  // namespace cubelab
