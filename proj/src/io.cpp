#include "cubelab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace cubelab {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("field '") + key + "' has the wrong type: " + e.what());
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

long to_long(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw PreconditionError("cannot read " + what + " from '" + s + "'");
  return v;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw PreconditionError("cannot read " + what + " from '" + s + "'");
  return v;
}

bool looks_like_shorthand(const std::string& spec, std::initializer_list<const char*> heads) {
  const std::string head = spec.substr(0, spec.find(':'));
  for (const char* h : heads)
    if (head == h) return true;
  return false;
}

/// Artifacts written by the tool nest their payload under "result".
const Json& payload(const Json& spec) {
  if (spec.is_object() && spec.contains("tool") && spec.contains("result")) return spec.at("result");
  return spec;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("failed while writing '" + path + "'");
}

GridMeasure measure_from_json(const Json& document) {
  const Json& spec = payload(document);
  if (!spec.is_object()) throw InputError("measure spec must be a JSON object");
  if (spec.contains("generator")) {
    const Json& g = spec.at("generator");
    const auto type = field<std::string>(g, "type");
    if (type == "uniform") return GridMeasure::uniform(field<long>(g, "n"));
    if (type == "dirac") return GridMeasure::dirac(field<long>(g, "n"), g.value("at", 0L));
    if (type == "cantor")
      return cantor_deterministic(field<int>(g, "base"), field<std::vector<int>>(g, "keep"), field<int>(g, "levels"));
    if (type == "cantor_random")
      return cantor_random(field<int>(g, "base"), field<int>(g, "branches"), field<int>(g, "levels"),
                           field<std::uint64_t>(g, "seed"));
    throw InputError("unknown generator type '" + type + "'");
  }
  const auto n = field<long>(spec, "n");
  const auto weights = field<std::vector<double>>(spec, "weights");
  if (static_cast<long>(weights.size()) != n)
    throw InputError("'weights' has " + std::to_string(weights.size()) + " entries but n = " + std::to_string(n));
  try {
    return GridMeasure::from_weights(Eigen::Map<const RealArray>(weights.data(), n));
  } catch (const PreconditionError& e) {
    throw InputError(e.what());
  }
}

Json measure_to_json(const GridMeasure& m) {
  Json j;
  j["n"] = m.size();
  j["mass"] = m.mass();
  j["clampMagnitude"] = m.clamp_magnitude();
  j["weights"] = std::vector<double>(m.weights().data(), m.weights().data() + m.size());
  return j;
}

GridMeasure measure_from_spec(const std::string& spec, std::uint64_t default_seed) {
  if (!looks_like_shorthand(spec, {"uniform", "dirac", "cantor", "cantor_random"}))
    return measure_from_json(read_json_file(spec));
  const auto parts = split(spec, ':');
  const std::string& type = parts.front();
  if (type == "uniform" || type == "dirac") {
    if (parts.size() > 2) throw PreconditionError("measure shorthand: expected " + type + "[:n]");
    const long n = parts.size() == 2 ? to_long(parts[1], "grid size") : 256;
    return type == "uniform" ? GridMeasure::uniform(n) : GridMeasure::dirac(n);
  }
  if (type == "cantor") {
    if (parts.size() != 4) throw PreconditionError("measure shorthand: expected cantor:base:d,d,...:levels");
    std::vector<int> keep;
    for (const auto& digit : split(parts[2], ',')) keep.push_back(static_cast<int>(to_long(digit, "kept digit")));
    return cantor_deterministic(static_cast<int>(to_long(parts[1], "base")), keep,
                                static_cast<int>(to_long(parts[3], "levels")));
  }
  if (parts.size() != 4 && parts.size() != 5)
    throw PreconditionError("measure shorthand: expected cantor_random:base:t:levels[:seed]");
  const std::uint64_t seed =
      parts.size() == 5 ? static_cast<std::uint64_t>(to_long(parts[4], "seed")) : default_seed;
  return cantor_random(static_cast<int>(to_long(parts[1], "base")), static_cast<int>(to_long(parts[2], "branches")),
                       static_cast<int>(to_long(parts[3], "levels")), seed);
}

LatticeSet lattice_from_json(const Json& document) {
  const Json& spec = payload(document);
  if (!spec.is_object()) throw InputError("lattice set must be a JSON object");
  const int d = spec.value("d", 1);
  const auto n_side = field<long>(spec, "nSide");
  try {
    if (d == 1) return LatticeSet::from_indices(1, n_side, field<std::vector<long>>(spec, "members"));
    return LatticeSet::from_points(d, n_side, field<std::vector<std::vector<long>>>(spec, "members"));
  } catch (const PreconditionError& e) {
    throw InputError(e.what());
  }
}

Json lattice_to_json(const LatticeSet& s) {
  Json j;
  j["d"] = s.dim();
  j["nSide"] = s.side();
  j["size"] = s.count();
  j["density"] = s.density();
  if (s.dim() == 1)
    j["members"] = s.indices();
  else
    j["members"] = s.points();
  return j;
}

LatticeSet lattice_from_spec(const std::string& spec, std::uint64_t default_seed) {
  if (!looks_like_shorthand(spec, {"behrend", "full", "random"})) return lattice_from_json(read_json_file(spec));
  const auto parts = split(spec, ':');
  const std::string& type = parts.front();
  if (type == "behrend") {
    if (parts.size() != 2) throw PreconditionError("set shorthand: expected behrend:N");
    return behrend(to_long(parts[1], "side length"));
  }
  if (type == "full") {
    if (parts.size() != 2 && parts.size() != 3) throw PreconditionError("set shorthand: expected full:N[:d]");
    const int d = parts.size() == 3 ? static_cast<int>(to_long(parts[2], "dimension")) : 1;
    return LatticeSet::full(d, to_long(parts[1], "side length"));
  }
  if (parts.size() < 3 || parts.size() > 5) throw PreconditionError("set shorthand: expected random:N:delta[:seed[:d]]");
  const std::uint64_t seed = parts.size() >= 4 ? static_cast<std::uint64_t>(to_long(parts[3], "seed")) : default_seed;
  const int d = parts.size() == 5 ? static_cast<int>(to_long(parts[4], "dimension")) : 1;
  return LatticeSet::random(d, to_long(parts[1], "side length"), to_double(parts[2], "delta"), seed);
}

Json number(double value) {
  if (std::isnan(value)) return nullptr;
  if (std::isinf(value)) return value > 0 ? "INF" : "-INF";
  return value;
}

Json to_json(const Complex& z) { return Json::array({number(z.real()), number(z.imag())}); }

Json to_json(const FrostmanReport& r) {
  Json j;
  j["alphaHat"] = number(r.alpha_hat);
  j["c1Hat"] = number(r.c1_hat);
  j["degenerate"] = r.degenerate;
  Json samples = Json::array();
  for (const auto& [radius, mass] : r.samples) samples.push_back(Json::array({number(radius), number(mass)}));
  j["samples"] = samples;
  return j;
}

Json to_json(const DecayReport& r) {
  Json j;
  j["order"] = r.order;
  j["betaHat"] = number(r.beta_hat);
  j["c2Hat"] = number(r.c2_hat);
  j["betaHatMean"] = number(r.beta_hat_mean);
  j["clamped"] = r.clamped;
  Json annuli = Json::array();
  for (const auto& [index, value] : r.annuli) annuli.push_back(Json::array({index, number(value)}));
  j["annuli"] = annuli;
  return j;
}

Json to_json(const CubeSpectrum& s) {
  Json j;
  j["k"] = s.k;
  j["n"] = s.n;
  j["indexOrder"] = "eta1 fastest, each axis in DFT order (index i is frequency i mod n)";
  Json re = Json::array(), im = Json::array();
  for (Index i = 0; i < s.values.size(); ++i) {
    re.push_back(number(s.values(i).real()));
    im.push_back(number(s.values(i).imag()));
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

Json to_json(const LadderReport& r) {
  Json j;
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    Json row;
    row["level"] = s.level;
    row["lambda"] = to_json(s.value);
    row["diff"] = number(s.diff);
    row["ratio"] = number(s.ratio);
    row["saturated"] = s.saturated;
    steps.push_back(row);
  }
  j["steps"] = steps;
  j["fittedRatio"] = number(r.fitted_ratio);
  j["converged"] = r.converged;
  j["saturated"] = r.saturated;
  return j;
}

Json to_json(const MarginalDensity& m) {
  Json j;
  j["rho"] = std::vector<double>(m.rho.data(), m.rho.data() + m.rho.size());
  Json norms = Json::object();
  for (const auto& [p, value] : m.p_norms) norms[format_full(p)] = number(value);
  j["pNorms"] = norms;
  j["threshold"] = m.threshold;
  j["positiveFraction"] = m.positive_fraction;
  j["positiveFractionNonzero"] = m.positive_fraction_nonzero;
  return j;
}

Json to_json(const SupportDiagnostic& s) {
  Json j;
  j["level"] = s.level;
  j["saturated"] = s.saturated;
  j["leakage"] = number(s.leakage);
  j["leakageSigned"] = number(s.leakage_signed);
  j["trivialMass"] = number(s.trivial_mass);
  j["total"] = number(s.total);
  return j;
}

Json to_json(const RateResult& r) {
  Json j;
  j["rK"] = number(r.r_k);
  j["omegaKP"] = number(r.omega_kp);
  j["empiricalSlope"] = r.empirical_slope ? number(*r.empirical_slope) : Json(nullptr);
  j["predictionGap"] = r.prediction_gap ? number(*r.prediction_gap) : Json(nullptr);
  j["passWeak"] = r.pass_weak;
  j["passStrong"] = r.pass_strong;
  j["verdict"] = verdict_name(r.verdict);
  j["fittedLevels"] = r.fitted_levels;
  return j;
}

Json to_json(const ConfigTally& t) {
  Json j;
  j["total"] = t.total;
  j["nontrivial"] = t.nontrivial;
  j["nontrivialDilations"] = t.nontrivial_dilations;
  return j;
}

Json to_json(const VarnavidesResult& r) {
  Json j;
  j["delta"] = r.delta;
  j["trials"] = r.trials;
  j["minNormalizedCount"] = number(r.min_normalized_count);
  Json dist = Json::object();
  for (const auto& [q, value] : r.distribution) dist[format_full(q)] = number(value);
  j["distribution"] = dist;
  j["perTrial"] = r.per_trial;
  if (r.injected_count) {
    j["injectedCount"] = number(*r.injected_count);
    j["injectedBelowMin"] = r.injected_below_min;
  }
  return j;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const Json& config) { return fnv1a_hex(config.dump()); }

std::string format_g(double value) {
  if (std::isinf(value)) return value > 0 ? "INF" : "-INF";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.6g", value);
  return buf;
}

std::string format_full(double value) {
  if (std::isinf(value)) return value > 0 ? "INF" : "-INF";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  // prefer the shortest form that still round-trips
  for (int precision = 1; precision < 17; ++precision) {
    char shorter[64];
    std::snprintf(shorter, sizeof shorter, "%.*g", precision, value);
    if (std::strtod(shorter, nullptr) == value) return shorter;
  }
  return buf;
}

std::string csv_artifact(const Json& config, const std::vector<std::string>& columns,
                         const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  out << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
  out << "# configHash: " << config_hash(config) << '\n';
  out << "# config: " << config.dump() << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

std::string json_artifact(const Json& config, const Json& result) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["configHash"] = config_hash(config);
  j["config"] = config;
  j["result"] = result;
  return j.dump(2) + "\n";
}

}  // namespace cubelab
