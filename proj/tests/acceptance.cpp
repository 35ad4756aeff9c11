// Acceptance suite: one PASS/FAIL line per criterion, exit status = number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cubelab/cli.hpp"
#include "cubelab/config_count.hpp"
#include "cubelab/discrete_patterns.hpp"
#include "cubelab/gowers.hpp"
#include "cubelab/rates.hpp"
#include "test_helpers.hpp"

using namespace cubelab;
using fixtures::rel_err;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, format, a, b, c);
  return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome ac1() {
  Outcome v;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(mix_seed(1, seed));
    for (Index n : {16, 32}) {
      const RealArray f = fixtures::random_density(n, rng);
      for (int k : {2, 3}) {
        const double direct = u_norm(f, k, NormRoute::Direct).value;
        const double fourier = u_norm(f, k, NormRoute::Fourier).value;
        worst = std::max(worst, rel_err(direct, fourier));
        ++compared;
      }
    }
  }
  const double elapsed = seconds_since(start);
  v.require(worst <= 1e-8, "route disagreement");
  v.require(elapsed <= 120.0, "over 2 min");
  v.detail = std::to_string(compared) + " comparisons, max rel err " + fmt("%.3g", worst) + ", " +
             fmt("%.2f s", elapsed) + (v.detail.empty() ? "" : " (" + v.detail + ")");
  return v;
}

Outcome ac2() {
  Outcome v;
  double worst = 1e300;
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 4 + static_cast<Index>(rng.below(29));
    RealArray f(n);
    // mix smooth, sparse and flat instances
    for (Index i = 0; i < n; ++i) f(i) = trial % 3 == 0 ? (rng.below(4) == 0 ? rng.uniform() : 0.0) : rng.uniform();
    if (f.sum() == 0.0) f(0) = 1.0;
    const CubeSpectrum s = cube_spectrum(f, 2);
    const double slack = s.zero().real() - s.values.abs().maxCoeff();
    worst = std::min(worst, slack);
  }
  v.require(worst >= -1e-12, "negative slack");
  v.detail = "100 instances, min slack " + fmt("%.3g", worst) + v.detail;
  return v;
}

Outcome ac3() {
  Outcome v;
  RateParams p;
  p.k = 2;
  for (int i = 1; i <= 50; ++i) {
    p.beta = i / 50.0;
    v.require(r_rate(p) == 2.0 * p.beta - 1.0, fmt("k=2 mismatch at beta=%g", p.beta));
  }
  p.k = 3;
  p.beta = 0.9;
  const double r3 = r_rate(p);
  v.require(std::abs(r3 - 0.801248) <= 1e-6, "r_3(0.9) off");
  for (int k = 2; k <= 6; ++k)
    for (int i = 1; i <= 50; ++i) {
      p.k = k;
      p.beta = i / 50.0;
      p.p = 1.0;
      v.require(omega(p) == r_rate(p), "omega(p=1) != r_rate");
    }
  v.detail = "r_3(0.9) = " + fmt("%.9f", r3) + (v.detail.empty() ? "" : " (" + v.detail + ")");
  return v;
}

Outcome ac4() {
  Outcome v;
  Rng rng(4);
  double gcs_worst = 1e300, tele_worst = 0.0;
  const Pattern ap = Pattern::integers({0, 1, 2});
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 4 + static_cast<Index>(rng.below(13));
    const ComplexArray gamma = fixtures::random_complex(n, rng);
    const std::vector<RealArray> hs{fixtures::random_signed(n, rng), fixtures::random_signed(n, rng)};
    const RealArray f = trial % 2 ? fixtures::random_density(n, rng) : fixtures::random_signed(n, rng);
    gcs_worst = std::min(gcs_worst, gcs_check(gamma, hs, f, ap).slack);
  }
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 4 + static_cast<Index>(rng.below(13));
    std::vector<RealArray> a, b;
    for (int t = 0; t < 3; ++t) {
      a.push_back(fixtures::random_density(n, rng));
      b.push_back(fixtures::random_density(n, rng));
    }
    Eigen::ArrayXXcd values(n, n);
    for (Index i = 0; i < n * n; ++i) values(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const WeightFunction g = WeightFunction::from_values(values);
    const TelescopingTerms t = telescoping_terms(&g, a, b, ap);
    tele_worst = std::max(tele_worst, std::abs(t.lhs - t.sum));
  }
  v.require(gcs_worst >= 0.0, "GCS slack negative");
  v.require(tele_worst <= 1e-10, "telescoping mismatch");
  v.detail = "GCS min slack " + fmt("%.3g", gcs_worst) + ", telescoping max err " + fmt("%.3g", tele_worst);
  return v;
}

/// Pairs a < c in A with even sum and midpoint in A.
long behrend_pair_oracle(const LatticeSet& a) {
  const auto members = a.indices();
  long found = 0;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      if ((members[i] + members[j]) % 2 == 0 && a.contains_index((members[i] + members[j]) / 2)) ++found;
  return found;
}

Outcome ac5() {
  Outcome v;
  const auto start = std::chrono::steady_clock::now();
  const Pattern ap = Pattern::integers({0, 1, 2});
  const VectorPattern vap = VectorPattern::from(ap);
  const double one = lambda(nullptr, RealArray::Ones(243), ap).value.real();
  v.require(std::abs(one - 1.0) <= 1e-12, "Lambda(1;1) != 1");
  for (long n : {16L, 101L, 256L})
    v.require(count_configs(LatticeSet::full(1, n), vap, WrapMode::Cyclic).total == n * n, "full box count");
  long checked = 0, worst = 0;
  for (long n = 1; n <= 2000; ++n) {
    const LatticeSet b = behrend(n);
    const long brute = count_configs(b, vap, WrapMode::Truncated).nontrivial;
    const long pairs = behrend_pair_oracle(b);
    worst = std::max({worst, brute, pairs});
    ++checked;
  }
  v.require(worst == 0, "Behrend set contains a 3-AP");
  const double elapsed = seconds_since(start);
  v.require(elapsed <= 60.0, "over 1 min");
  v.detail = "Lambda = " + fmt("%.15g", one) + ", Behrend nSide 1.." + std::to_string(checked) +
             " all AP-free, " + fmt("%.2f s", elapsed);
  return v;
}

Outcome ac6() {
  Outcome v;
  const GridMeasure m = cantor_random(3, 2, 8, 1);
  const auto rows = telescope_ladder(m, 2, 20);
  std::string norms;
  int increases = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    norms += (i ? " " : "") + fmt("%.6f", rows[i].norm);
    if (i > 0 && !(rows[i].norm < rows[i - 1].norm)) ++increases;
  }
  RateParams params;
  params.k = 2;
  params.alpha = clamp_exponent(frostman_fit(m).alpha_hat);
  params.beta = clamp_exponent(decay_fit(fourier(m)).beta_hat);
  const RateResult fit = telescope_fit(rows, params);
  const double slope = fit.empirical_slope.value_or(0.0);
  v.require(increases == 0, std::to_string(increases) + " of " + std::to_string(rows.size() - 1) +
                                " steps not strictly decreasing");
  v.require(slope < 0.0, "fitted slope not negative");
  // regression pins for seed 1
  v.require(rows.size() == 10 && std::abs(slope - (-0.00820864)) <= 1e-7, "baseline moved");
  double uniform_max = 0.0;
  for (const auto& row : telescope_ladder(GridMeasure::uniform(6561), 2, 20))
    uniform_max = std::max(uniform_max, row.norm);
  v.require(uniform_max == 0.0, "uniform differences nonzero");
  v.detail = "seed 1 norms [" + norms + "], slope " + fmt("%.6g", slope) + ", uniform max " +
             fmt("%g", uniform_max) + (v.detail.empty() ? "" : " (" + v.detail + ")");
  return v;
}

Outcome ac7() {
  Outcome v;
  const Pattern ap = Pattern::integers({0, 1, 2});
  std::vector<RealArray> measures{GridMeasure::uniform(81).weights(), GridMeasure::dirac(81).weights(),
                                  cantor_deterministic(3, {0, 2}, 6).weights(), cantor_random(3, 2, 6, 1).weights(),
                                  mollify(cantor_random(3, 2, 6, 1), 5).density};
  double worst = 0.0;
  for (const RealArray& f : measures) {
    const std::vector<RealArray> fs(3, f);
    worst = std::max(worst, rel_err(marginal(fs, ap).rho.mean(), lambda(nullptr, f, ap).value.real()));
  }
  v.require(worst <= 1e-10, "marginal inconsistent");
  const GridMeasure cantor = cantor_deterministic(3, {0, 2}, 8);
  const int level = MollifierLadder(cantor.size()).max_unsaturated_level();
  const RealArray deepest = mollify(cantor, level).density;
  const MarginalDensity rho = marginal(std::vector<RealArray>(3, deepest), ap);
  worst = std::max(worst, rel_err(rho.rho.mean(), lambda(nullptr, deepest, ap).value.real()));
  v.require(worst <= 1e-10, "marginal inconsistent at the deepest level");
  v.require(rho.positive_fraction_nonzero > 0.0, "no positive r");
  v.detail = "max rel err " + fmt("%.3g", worst) + ", Cantor 3^8 level " + std::to_string(level) +
             ": fraction of r != 0 with rho > 1e-9 = " + fmt("%.6f", rho.positive_fraction_nonzero);
  return v;
}

Outcome ac8() {
  Outcome v;
  const VectorPattern ap = VectorPattern::parse("0,1,2");
  const VarnavidesResult full = varnavides_scan(256, 1.0, ap, 3, 1);
  v.require(full.min_normalized_count == 1.0, "delta = 1 not exactly 1");
  std::string mins;
  for (double delta : {0.5, 0.75}) {
    const VarnavidesResult r = varnavides_scan(256, delta, ap, 200, 1);
    v.require(r.min_normalized_count > 0.0, fmt("min not positive at delta %g", delta));
    mins += fmt(" delta %.2f min %.6f", delta, r.min_normalized_count);
  }
  v.detail = "delta 1 gives " + fmt("%.17g", full.min_normalized_count) + ";" + mins;
  return v;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome ac9() {
  Outcome v;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "cubelab_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::vector<std::vector<std::string>> recipes{
      {"construct", "--measure", "cantor_random:3:2:8:1"},
      {"unorm", "--measure", "cantor:3:0,2:3", "--k", "3", "--route", "direct"},
      {"decay", "--measure", "cantor_random:3:2:8:1"},
      {"frostman", "--measure", "cantor:3:0,2:8"},
      {"count", "--measure", "cantor_random:3:2:8:1", "--levels", "0..10"},
      {"marginal", "--measure", "cantor:3:0,2:6", "--level", "7"},
      {"telescope", "--measure", "cantor_random:3:2:8:1", "--k", "2"},
      {"rate", "--k", "3", "--beta", "0.9"},
      {"discrete", "varnavides", "--nside", "128", "--delta", "0.5", "--trials", "40", "--threads", "4"},
  };
  int artifacts = 0;
  for (const std::string ext : {"json", "csv"}) {
    int index = 0;
    for (const auto& recipe : recipes) {
      const std::string target = (dir / ("run" + std::to_string(index++) + "." + ext)).string();
      std::vector<std::string> args{"--out", ext == "json" ? target : "csv"};
      args.insert(args.end(), recipe.begin(), recipe.end());
      std::string bytes[2];
      for (auto& b : bytes) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        v.require(code == 0, recipe[0] + " exited " + std::to_string(code) + ": " + err.str());
        b = ext == "json" ? slurp(target) : out.str();
      }
      v.require(!bytes[0].empty() && bytes[0] == bytes[1], recipe[0] + " differs between runs");
      ++artifacts;
    }
  }
  fs::remove_all(dir);
  v.detail = std::to_string(artifacts) + " artifacts compared byte for byte" +
             (v.detail.empty() ? "" : " (" + v.detail + ")");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 dual-route Gowers norms", ac1},  {"AC2 cube spectrum peak at eta = 0", ac2},
      {"AC3 closed-form rates", ac3},         {"AC4 GCS step and telescoping identity", ac4},
      {"AC5 counting sanity", ac5},           {"AC6 telescoping decay", ac6},
      {"AC7 marginal consistency", ac7},      {"AC8 Varnavides scan", ac8},
      {"AC9 reproducibility", ac9},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    if (!v.pass) ++failed;
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
