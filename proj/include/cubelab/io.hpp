#pragma once

// Serialization: measure and lattice-set files, report JSON with camelCase
// keys, CSV artifacts with a commented header, and the config hash.

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "cubelab/config_count.hpp"
#include "cubelab/discrete_patterns.hpp"
#include "cubelab/gowers.hpp"
#include "cubelab/rates.hpp"
#include "cubelab/torus_measure.hpp"

namespace cubelab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "cubelab";
inline constexpr const char* kToolVersion = "0.1.0";

/// {"n", "weights"} or {"generator": {...}}. Throws InputError on malformed input.
GridMeasure measure_from_json(const Json& spec);
Json measure_to_json(const GridMeasure& m);

/// Shorthands uniform[:n], dirac[:n], cantor:base:keep,keep:levels,
/// cantor_random:base:t:levels[:seed]; anything else is a JSON file path.
GridMeasure measure_from_spec(const std::string& spec, std::uint64_t default_seed = 0);

/// {"d", "nSide", "members"}; 2-D members are [x, y] pairs.
LatticeSet lattice_from_json(const Json& spec);
Json lattice_to_json(const LatticeSet& s);

/// Shorthands behrend:N, full:N[:d], random:N:delta[:seed[:d]]; otherwise a JSON file path.
LatticeSet lattice_from_spec(const std::string& spec, std::uint64_t default_seed = 0);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Finite numbers as-is; infinities as the strings "INF" / "-INF"; NaN as null.
Json number(double value);
Json to_json(const Complex& z);
Json to_json(const FrostmanReport& r);
Json to_json(const DecayReport& r);
Json to_json(const CubeSpectrum& s);
Json to_json(const LadderReport& r);
Json to_json(const MarginalDensity& m);
Json to_json(const SupportDiagnostic& s);
Json to_json(const RateResult& r);
Json to_json(const ConfigTally& t);
Json to_json(const VarnavidesResult& r);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& text);
/// Hash of the compact dump of the config.
std::string config_hash(const Json& config);

/// printf("%#.6g").
std::string format_g(double value);

/// Commented header echoing tool, version, config hash and config, then the CSV body.
std::string csv_artifact(const Json& config, const std::vector<std::string>& columns,
                         const std::vector<std::vector<std::string>>& rows);
/// {"tool", "version", "configHash", "config", "result"} dumped with two-space indent.
std::string json_artifact(const Json& config, const Json& result);

/// Shortest round-trip representation for CSV cells.
std::string format_full(double value);

}  // namespace cubelab
