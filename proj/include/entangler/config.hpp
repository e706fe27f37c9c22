// config.hpp: scenario files. INI sections [scenario] [system] [target]
// [drive] [decoherence] [measurement] [integrator] [analysis] [sweep] [output];
// every key is checked against a fixed schema. Values are kept as text so a
// sweep point is just the base settings with a few keys replaced.
#pragma once

#include "entangler/analytics.hpp"
#include "entangler/protocol.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace entangler {

// "section.key" -> raw value
using Settings = std::map<std::string, std::string>;

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct OutputSpec {
  std::string path;        // empty: stdout
  std::string trajectory;  // simulate only; empty: none
  bool timing = false;     // append wall_time_s
};

struct ScenarioConfig {
  std::string id = "scenario";
  SystemParams system;
  TargetSpec target;
  bool noon = true;
  DriveSpec drive;
  DecoherenceRates rates;
  MeasurementSpec measurement;
  ProtocolOptions options;
  WeightConvention weights = WeightConvention::Poisson;
  double collision_threshold = 5.0;
  std::optional<double> shift_ratio;  // set: omega_e was derived from it
};

struct ConfigFile {
  Settings settings;
  std::vector<SweepAxis> sweep;  // file order
  OutputSpec output;
};

// Throws InvalidArgument on syntax errors, unknown keys or bad values.
ConfigFile parse_config_text(const std::string& text);
ConfigFile load_config(const std::string& path);

// "section.key=value"; sweep.<section>.<key>=list replaces or adds an axis,
// an empty list removes it.
void apply_override(ConfigFile& config, const std::string& assignment);

// Resolves defaults (planned drive, truncation, omega_e from shift_ratio).
ScenarioConfig resolve(const Settings& settings);

// Axis values: "a, b, c", "linspace(a, b, n)" or "logspace(a, b, n)" (decades).
std::vector<std::string> expand_axis(const std::string& spec);

// Cartesian product, last axis fastest.
std::vector<Settings> sweep_points(const ConfigFile& config);
std::size_t sweep_size(const ConfigFile& config);

// FNV-1a over the canonical settings and sweep axes (output keys excluded).
std::uint64_t config_hash(const ConfigFile& config);
std::string hash_hex(std::uint64_t hash);

// Known keys, for error messages and docs.
const std::vector<std::string>& known_keys();

double parse_double(const std::string& key, const std::string& text);
int parse_int(const std::string& key, const std::string& text);
bool parse_bool(const std::string& key, const std::string& text);

}  // namespace entangler
