#include "cubelab/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "cubelab/io.hpp"

namespace cubelab::cli {

namespace {

struct Artifact {
  Json config;
  Json result;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string text;
};

struct Globals {
  std::uint64_t seed = 0;
  std::optional<double> budget;
  std::string out;
};

Json base_config(const std::string& command, const Globals& g) {
  Json c;
  c["command"] = command;
  c["seed"] = g.seed;
  c["budget"] = g.budget ? number(*g.budget) : Json(nullptr);
  c["out"] = g.out;
  return c;
}

ComputeBudget budget_of(const Globals& g) { return {g.budget}; }

std::pair<int, int> parse_levels(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int level = std::stoi(text);
      return {level, level};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw PreconditionError("--levels expects L or A..B, got '" + text + "'");
  }
}

std::string line(const std::string& key, double value) { return key + " " + format_g(value) + "\n"; }

// ---- subcommands ---------------------------------------------------------

struct MeasureOpts {
  std::string measure;
};

Artifact do_construct(const Globals& g, const MeasureOpts& o) {
  const GridMeasure m = measure_from_spec(o.measure, g.seed);
  Artifact a;
  a.config = base_config("construct", g);
  a.config["measure"] = o.measure;
  a.result = measure_to_json(m);
  a.columns = {"x", "weight"};
  for (Index x = 0; x < m.size(); ++x) a.rows.push_back({std::to_string(x), format_full(m.weights()(x))});
  a.text = "n " + std::to_string(m.size()) + "\n" + line("mass", m.mass()) + line("clampMagnitude", m.clamp_magnitude());
  return a;
}

struct UnormOpts {
  std::string measure;
  int k = 2;
  std::string route = "fourier";
};

Artifact do_unorm(const Globals& g, const UnormOpts& o) {
  const GridMeasure m = measure_from_spec(o.measure, g.seed);
  const UNorm u = u_norm(m.weights(), o.k, parse_route(o.route), budget_of(g));
  Artifact a;
  a.config = base_config("unorm", g);
  a.config["measure"] = o.measure;
  a.config["k"] = o.k;
  a.config["route"] = o.route;
  a.result["norm"] = number(u.value);
  a.result["power"] = to_json(u.power);
  a.result["nonReal"] = u.non_real;
  a.columns = {"k", "route", "norm"};
  a.rows.push_back({std::to_string(o.k), o.route, format_full(u.value)});
  a.text = line("norm", u.value);
  if (u.non_real) a.text += "warning: cube mean is not real; reporting the root of its modulus\n";
  return a;
}

struct DecayOpts {
  std::string measure;
  int k = 1;
};

Artifact do_decay(const Globals& g, const DecayOpts& o) {
  const GridMeasure m = measure_from_spec(o.measure, g.seed);
  if (o.k < 1) throw PreconditionError("decay: order must be at least 1");
  const DecayReport r = o.k == 1 ? decay_fit(fourier(m)) : decay_fit(cube_spectrum(m.weights(), o.k, budget_of(g)));
  Artifact a;
  a.config = base_config("decay", g);
  a.config["measure"] = o.measure;
  a.config["k"] = o.k;
  a.result = to_json(r);
  a.columns = {"annulus", "max"};
  for (const auto& [j, v] : r.annuli) a.rows.push_back({std::to_string(j), format_full(v)});
  a.text = line("betaHat", r.beta_hat) + line("betaHatMean", r.beta_hat_mean) + line("c2Hat", r.c2_hat);
  if (r.clamped) a.text += "note: negative exponent clamped to 0\n";
  return a;
}

Artifact do_frostman(const Globals& g, const MeasureOpts& o) {
  const GridMeasure m = measure_from_spec(o.measure, g.seed);
  const FrostmanReport r = frostman_fit(m);
  Artifact a;
  a.config = base_config("frostman", g);
  a.config["measure"] = o.measure;
  a.result = to_json(r);
  a.columns = {"radius", "maxBallMass"};
  for (const auto& [radius, mass] : r.samples) a.rows.push_back({format_full(radius), format_full(mass)});
  a.text = line("alphaHat", r.alpha_hat) + line("c1Hat", r.c1_hat);
  if (r.degenerate) a.text += "note: degenerate fit (all ball masses equal)\n";
  return a;
}

struct CountOpts {
  std::string measure;
  std::string pattern = "0,1,2";
  std::string levels = "0..8";
  std::string taper = "raised-cosine";
};

Artifact do_count(const Globals& g, const CountOpts& o) {
  const GridMeasure m = measure_from_spec(o.measure, g.seed);
  const Pattern p = Pattern::parse(o.pattern);
  const auto [first, last] = parse_levels(o.levels);
  if (first < 0 || last < first) throw PreconditionError("--levels must satisfy 0 <= A <= B");
  const LadderReport r = lambda_ladder(nullptr, m, p, last, parse_taper(o.taper));
  Artifact a;
  a.config = base_config("count", g);
  a.config["measure"] = o.measure;
  a.config["pattern"] = p.to_string();
  a.config["levels"] = o.levels;
  a.config["taper"] = o.taper;
  a.result = to_json(r);
  a.columns = {"level", "lambda", "diff", "ratio"};
  std::ostringstream text;
  text << "level lambda diff ratio\n";
  for (const auto& s : r.steps) {
    if (s.level < first) continue;
    a.rows.push_back({std::to_string(s.level), format_full(s.value.real()), format_full(s.diff), format_full(s.ratio)});
    text << s.level << ' ' << format_g(s.value.real()) << ' ' << format_g(s.diff) << ' ' << format_g(s.ratio)
         << (s.saturated ? " saturated" : "") << '\n';
  }
  text << line("fittedRatio", r.fitted_ratio) << "converged " << (r.converged ? "yes" : "no") << '\n';
  a.text = text.str();
  return a;
}

struct MarginalOpts {
  std::string measure;
  std::string set;
  std::string pattern = "0,1,2";
  int level = -1;
  std::vector<double> pnorms;
  double threshold = 1e-9;
  std::string mode = "cyclic";
  std::string taper = "raised-cosine";
};

Artifact do_marginal(const Globals& g, const MarginalOpts& o) {
  if (o.measure.empty() == o.set.empty()) throw PreconditionError("marginal: give exactly one of --measure or --set");
  RealArray density;
  if (!o.measure.empty()) {
    const GridMeasure m = measure_from_spec(o.measure, g.seed);
    density = o.level < 0 ? m.weights() : mollify(m, o.level, parse_taper(o.taper)).density;
  } else {
    const LatticeSet s = lattice_from_spec(o.set, g.seed);
    if (s.dim() != 1) throw PreconditionError("marginal: lattice sets must be one-dimensional");
    density = RealArray::Zero(s.side());
    for (long i : s.indices()) density(i) = 1.0;
  }
  const Pattern p = Pattern::parse(o.pattern);
  const WrapMode mode = parse_wrap_mode(o.mode);
  const std::vector<RealArray> fs(static_cast<std::size_t>(p.k() + 1), density);
  const MarginalDensity md = marginal(fs, p, o.pnorms, o.threshold, mode);
  const double lam = lambda(nullptr, fs, p, mode).value.real();

  Artifact a;
  a.config = base_config("marginal", g);
  a.config["measure"] = o.measure;
  a.config["set"] = o.set;
  a.config["pattern"] = p.to_string();
  a.config["level"] = o.level;
  a.config["pnorms"] = o.pnorms;
  a.config["threshold"] = o.threshold;
  a.config["mode"] = o.mode;
  a.config["taper"] = o.taper;
  a.result = to_json(md);
  a.result["lambda"] = number(lam);
  a.columns = {"r", "rho"};
  for (Index r = 0; r < md.rho.size(); ++r) a.rows.push_back({std::to_string(r), format_full(md.rho(r))});
  a.text = line("lambda", lam);
  for (const auto& [pp, v] : md.p_norms) a.text += "norm[" + format_full(pp) + "] " + format_g(v) + "\n";
  a.text += line("positiveFraction", md.positive_fraction) + line("positiveFractionNonzero", md.positive_fraction_nonzero);
  return a;
}

struct TelescopeOpts {
  std::string measure;
  int k = 2;
  int maxlevel = 30;
  std::string taper = "raised-cosine";
  std::optional<double> alpha;
  std::optional<double> beta;
  double weak_factor = 0.5;
  double strong_tol = 0.3;
};

Artifact do_telescope(const Globals& g, const TelescopeOpts& o) {
  const GridMeasure m = measure_from_spec(o.measure, g.seed);
  const auto rows = telescope_ladder(m, o.k, o.maxlevel, parse_taper(o.taper), budget_of(g));
  RateParams params;
  params.k = o.k;
  params.alpha = clamp_exponent(o.alpha ? *o.alpha : frostman_fit(m).alpha_hat);
  params.beta = clamp_exponent(o.beta ? *o.beta : decay_fit(fourier(m)).beta_hat);
  const RateResult r = telescope_fit(rows, params, {o.weak_factor, o.strong_tol});

  Artifact a;
  a.config = base_config("telescope", g);
  a.config["measure"] = o.measure;
  a.config["k"] = o.k;
  a.config["maxlevel"] = o.maxlevel;
  a.config["taper"] = o.taper;
  a.config["alpha"] = o.alpha ? number(*o.alpha) : Json(nullptr);
  a.config["beta"] = o.beta ? number(*o.beta) : Json(nullptr);
  a.config["weakFactor"] = o.weak_factor;
  a.config["strongTolerance"] = o.strong_tol;
  a.result = to_json(r);
  a.result["alphaUsed"] = params.alpha;
  a.result["betaUsed"] = params.beta;
  Json ladder = Json::array();
  std::ostringstream text;
  text << "level norm log2norm\n";
  for (const auto& row : rows) {
    ladder.push_back({{"level", row.level}, {"norm", number(row.norm)}, {"log2norm", number(row.log2_norm)}});
    a.rows.push_back({std::to_string(row.level), format_full(row.norm), format_full(row.log2_norm)});
    text << row.level << ' ' << format_g(row.norm) << ' ' << format_g(row.log2_norm) << '\n';
  }
  a.result["ladder"] = ladder;
  a.columns = {"level", "norm", "log2norm"};
  text << line("rK", r.r_k);
  if (r.empirical_slope) text << line("empiricalSlope", *r.empirical_slope) << line("predictionGap", *r.prediction_gap);
  text << "verdict " << verdict_name(r.verdict) << '\n';
  a.text = text.str();
  return a;
}

struct RateOpts {
  int k = 2;
  int d = 1;
  double alpha = 1.0;
  double beta = 1.0;
  double p = 1.0;
  bool raw_sign = false;
};

Artifact do_rate(const Globals& g, const RateOpts& o) {
  const RateParams params{o.k, o.d, o.alpha, o.beta, o.p};
  const double rk = r_rate(params);
  const double w = omega(params, o.raw_sign);
  Artifact a;
  a.config = base_config("rate", g);
  a.config["k"] = o.k;
  a.config["d"] = o.d;
  a.config["alpha"] = o.alpha;
  a.config["beta"] = o.beta;
  a.config["p"] = o.p;
  a.config["rawSign"] = o.raw_sign;
  a.result["rK"] = number(rk);
  a.result["omegaKP"] = number(w);
  a.columns = {"k", "alpha", "beta", "p", "rK", "omegaKP"};
  a.rows.push_back({std::to_string(o.k), format_full(o.alpha), format_full(o.beta), format_full(o.p), format_full(rk),
                    format_full(w)});
  a.text = line("rK", rk) + line("omegaKP", w);
  return a;
}

struct DiscreteOpts {
  std::string set;
  std::string pattern = "0,1,2";
  std::string mode = "cyclic";
  long nside = 256;
  double delta = 0.5;
  int trials = 200;
  std::string inject;
  unsigned threads = 0;
};

Artifact do_discrete_count(const Globals& g, const DiscreteOpts& o) {
  const LatticeSet s = lattice_from_spec(o.set, g.seed);
  const VectorPattern p = VectorPattern::parse(o.pattern);
  const ConfigTally t = count_configs(s, p, parse_wrap_mode(o.mode));
  Artifact a;
  a.config = base_config("discrete count", g);
  a.config["set"] = o.set;
  a.config["pattern"] = p.to_string();
  a.config["mode"] = o.mode;
  a.result = to_json(t);
  a.result["normalized"] = number(normalized_count(t, s));
  a.result["setSize"] = s.count();
  a.columns = {"total", "nontrivial", "normalized"};
  a.rows.push_back({std::to_string(t.total), std::to_string(t.nontrivial), format_full(normalized_count(t, s))});
  a.text = "total " + std::to_string(t.total) + "\nnontrivial " + std::to_string(t.nontrivial) + "\n" +
           line("normalized", normalized_count(t, s));
  return a;
}

Artifact do_discrete_behrend(const Globals& g, const DiscreteOpts& o) {
  const LatticeSet s = behrend(o.nside);
  const ConfigTally t = count_configs(s, VectorPattern::parse("0,1,2"), WrapMode::Truncated);
  Artifact a;
  a.config = base_config("discrete behrend", g);
  a.config["nside"] = o.nside;
  a.result = lattice_to_json(s);
  a.result["nontrivial3AP"] = t.nontrivial;
  a.columns = {"member"};
  for (long i : s.indices()) a.rows.push_back({std::to_string(i)});
  a.text = "size " + std::to_string(s.count()) + "\n" + line("density", s.density()) + "nontrivial3AP " +
           std::to_string(t.nontrivial) + "\n";
  return a;
}

Artifact do_discrete_varnavides(const Globals& g, const DiscreteOpts& o) {
  const VectorPattern p = VectorPattern::parse(o.pattern);
  std::optional<LatticeSet> injected;
  if (!o.inject.empty()) injected = lattice_from_spec(o.inject, g.seed);
  const VarnavidesResult r = varnavides_scan(o.nside, o.delta, p, o.trials, g.seed, parse_wrap_mode(o.mode),
                                             injected ? &*injected : nullptr, o.threads);
  Artifact a;
  a.config = base_config("discrete varnavides", g);
  a.config["nside"] = o.nside;
  a.config["delta"] = o.delta;
  a.config["pattern"] = p.to_string();
  a.config["trials"] = o.trials;
  a.config["mode"] = o.mode;
  a.config["inject"] = o.inject;
  a.result = to_json(r);
  a.columns = {"trial", "normalizedCount"};
  for (std::size_t t = 0; t < r.per_trial.size(); ++t)
    a.rows.push_back({std::to_string(t), format_full(r.per_trial[t])});
  std::ostringstream text;
  text << line("minNormalizedCount", r.min_normalized_count);
  for (const auto& [q, v] : r.distribution) text << "quantile[" << format_full(q) << "] " << format_g(v) << '\n';
  if (r.injected_count)
    text << line("injectedCount", *r.injected_count) << "injectedBelowMin " << (r.injected_below_min ? "yes" : "no")
         << '\n';
  a.text = text.str();
  return a;
}

void emit(const Artifact& a, const std::string& out_spec, std::ostream& out) {
  const bool as_csv = out_spec == "csv" || (out_spec.size() > 4 && out_spec.ends_with(".csv"));
  const std::string body = as_csv ? csv_artifact(a.config, a.columns, a.rows) : json_artifact(a.config, a.result);
  if (out_spec == "csv" || out_spec == "json") {
    out << body;
    return;
  }
  if (!out_spec.empty()) write_text_file(out_spec, body);
  out << "# " << kToolName << ' ' << kToolVersion << " configHash " << config_hash(a.config) << '\n';
  out << "# config " << a.config.dump() << '\n';
  out << a.text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Higher-order Fourier analysis laboratory for fractal measures on the torus", "cubelab"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.option_defaults()->always_capture_default();

  Globals globals;
  app.add_option("--seed", globals.seed, "Master seed for random constructions");
  app.add_option("--budget", globals.budget, "Maximum tensor cells for the cube routines");
  app.add_option("--out", globals.out, "csv or json to print an artifact, or a file path (.csv or .json)");

  std::function<Artifact()> action;

  MeasureOpts construct_opts;
  auto* construct = app.add_subcommand("construct", "Build a measure and print its weights");
  construct->add_option("--measure", construct_opts.measure, "Measure shorthand or JSON file")->required();
  construct->callback([&] { action = [&] { return do_construct(globals, construct_opts); }; });

  UnormOpts unorm_opts;
  auto* unorm = app.add_subcommand("unorm", "U^k norm of a measure");
  unorm->add_option("--measure", unorm_opts.measure, "Measure shorthand or JSON file")->required();
  unorm->add_option("--k", unorm_opts.k, "Order (>= 2)");
  unorm->add_option("--route", unorm_opts.route, "direct or fourier");
  unorm->callback([&] { action = [&] { return do_unorm(globals, unorm_opts); }; });

  DecayOpts decay_opts;
  auto* decay = app.add_subcommand("decay", "Fit the Fourier decay exponent");
  decay->add_option("--measure", decay_opts.measure, "Measure shorthand or JSON file")->required();
  decay->add_option("--k", decay_opts.k, "Cube-spectrum order (1 = classical)");
  decay->callback([&] { action = [&] { return do_decay(globals, decay_opts); }; });

  MeasureOpts frostman_opts;
  auto* frostman = app.add_subcommand("frostman", "Fit the ball-mass exponent");
  frostman->add_option("--measure", frostman_opts.measure, "Measure shorthand or JSON file")->required();
  frostman->callback([&] { action = [&] { return do_frostman(globals, frostman_opts); }; });

  CountOpts count_opts;
  auto* count = app.add_subcommand("count", "Configuration counts along the mollification ladder");
  count->add_option("--measure", count_opts.measure, "Measure shorthand or JSON file")->required();
  count->add_option("--pattern", count_opts.pattern, "Pattern points, e.g. 0,1,2 or 0,1/2,1");
  count->add_option("--levels", count_opts.levels, "L or A..B");
  count->add_option("--taper", count_opts.taper, "Mollifier taper (raised-cosine)");
  count->callback([&] { action = [&] { return do_count(globals, count_opts); }; });

  MarginalOpts marginal_opts;
  auto* marg = app.add_subcommand("marginal", "Dilation marginal of the configuration count");
  marg->add_option("--measure", marginal_opts.measure, "Measure shorthand or JSON file");
  marg->add_option("--set", marginal_opts.set, "Lattice set used as an indicator density");
  marg->add_option("--pattern", marginal_opts.pattern, "Pattern points, e.g. 0,1,2 or 0,1/2,1");
  marg->add_option("--level", marginal_opts.level, "Mollification level (-1 = raw)");
  marg->add_option("--pnorm", marginal_opts.pnorms, "Norm exponents (repeatable)");
  marg->add_option("--threshold", marginal_opts.threshold, "rho(r) above this counts as positive");
  marg->add_option("--mode", marginal_opts.mode, "cyclic or truncated");
  marg->add_option("--taper", marginal_opts.taper, "Mollifier taper (raised-cosine)");
  marg->callback([&] { action = [&] { return do_marginal(globals, marginal_opts); }; });

  TelescopeOpts telescope_opts;
  auto* telescope = app.add_subcommand("telescope", "Decay of successive mollifier differences in U^k");
  telescope->add_option("--measure", telescope_opts.measure, "Measure shorthand or JSON file")->required();
  telescope->add_option("--k", telescope_opts.k, "Norm order (>= 2)");
  telescope->add_option("--maxlevel", telescope_opts.maxlevel, "Deepest ladder level tried");
  telescope->add_option("--taper", telescope_opts.taper, "Mollifier taper (raised-cosine)");
  telescope->add_option("--alpha", telescope_opts.alpha, "Override the fitted ball exponent");
  telescope->add_option("--beta", telescope_opts.beta, "Override the fitted decay exponent");
  telescope->add_option("--weak-factor", telescope_opts.weak_factor, "Weak pass: slope <= -factor * r_k / 2^k");
  telescope->add_option("--strong-tol", telescope_opts.strong_tol, "Strong pass: |slope + r_k / 2^k| <= tol");
  telescope->callback([&] { action = [&] { return do_telescope(globals, telescope_opts); }; });

  RateOpts rate_opts;
  auto* rate = app.add_subcommand("rate", "Closed-form r_k and omega_k^p");
  rate->add_option("--k", rate_opts.k, "Order (>= 2)");
  rate->add_option("--d", rate_opts.d, "Dimension");
  rate->add_option("--alpha", rate_opts.alpha, "Ball exponent in (0, 1]");
  rate->add_option("--beta", rate_opts.beta, "Decay exponent in (0, 1]");
  rate->add_option("--p", rate_opts.p, "Mixed-norm exponent in [1, 2)");
  rate->add_flag("--raw-sign", rate_opts.raw_sign, "Negate omega");
  rate->callback([&] { action = [&] { return do_rate(globals, rate_opts); }; });

  DiscreteOpts discrete_opts;
  auto* discrete = app.add_subcommand("discrete", "Integer-lattice counts, Behrend sets, Varnavides scans");
  discrete->require_subcommand(1);
  auto* dcount = discrete->add_subcommand("count", "Exact configuration count in a lattice set");
  dcount->add_option("--set", discrete_opts.set, "Lattice set shorthand or JSON file")->required();
  dcount->add_option("--pattern", discrete_opts.pattern, "Pattern points; 2-D points as x:y");
  dcount->add_option("--mode", discrete_opts.mode, "cyclic or truncated");
  dcount->callback([&] { action = [&] { return do_discrete_count(globals, discrete_opts); }; });
  auto* dbehrend = discrete->add_subcommand("behrend", "3-AP-free control set");
  dbehrend->add_option("--nside", discrete_opts.nside, "Side length")->required();
  dbehrend->callback([&] { action = [&] { return do_discrete_behrend(globals, discrete_opts); }; });
  auto* dvarn = discrete->add_subcommand("varnavides", "Random-subset scan of normalized counts");
  dvarn->add_option("--nside", discrete_opts.nside, "Side length");
  dvarn->add_option("--delta", discrete_opts.delta, "Density of each random set");
  dvarn->add_option("--pattern", discrete_opts.pattern, "Pattern points; 2-D points as x:y");
  dvarn->add_option("--trials", discrete_opts.trials, "Number of random sets");
  dvarn->add_option("--mode", discrete_opts.mode, "cyclic or truncated");
  dvarn->add_option("--inject", discrete_opts.inject, "Control set scored against the ensemble");
  dvarn->add_option("--threads", discrete_opts.threads, "Worker threads (0 = all cores)");
  dvarn->callback([&] { action = [&] { return do_discrete_varnavides(globals, discrete_opts); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolName << ' ' << kToolVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kUsage;
  }

  try {
    if (!action) throw PreconditionError("no subcommand selected");
    emit(action(), globals.out, out);
    return kOk;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace cubelab::cli
