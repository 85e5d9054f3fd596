#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oceansim/adversary.hpp"
#include "oceansim/dsr.hpp"
#include "oceansim/mobility.hpp"
#include "oceansim/ocean.hpp"
#include "oceansim/radio.hpp"
#include "oceansim/workload.hpp"

namespace oceansim {

inline constexpr std::string_view kGeneratorVersion = "oceansim 1.0.0";

/// Everything one simulation run depends on apart from its seed.
struct ScenarioConfig {
  std::size_t n_nodes = 40;
  mobility::Params mobility;
  radio::RadioParams radio;
  radio::EnergyParams energy;
  dsr::Params dsr;
  ocean::Params ocean;
  bool ocean_enabled = true;
  workload::Params workload;
  double malicious_fraction = 0.0;
  adversary::Profile malicious_kind = adversary::Profile::Misleading;
  double drop_prob = 1.0;
  bool exclude_malicious_endpoints = true;
  std::uint64_t base_seed = 1;
  std::size_t n_runs = 5;

  SimTime sim_duration() const { return mobility.sim_duration; }
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), m_line(line) {}
  int line() const { return m_line; }

 private:
  int m_line;
};

enum class Provenance { Published, Implementation };

struct ConfigField {
  std::string_view key;
  Provenance provenance;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

/// Every recognised scenario key, in output order.
const std::vector<ConfigField>& config_fields();

/// Parses and range-checks one value. Throws ConfigError for unknown keys
/// or bad values.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Fills paired settings that were not given explicitly, then validates.
/// A faulty_threshold given without second_chance_timeout/reentry_rating
/// takes the paired values from ocean::paired_second_chance.
void finalize(ScenarioConfig& cfg, const std::set<std::string, std::less<>>& explicit_keys);

/// Parses `key = value` lines; `#` starts a comment. Missing keys keep
/// their defaults.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// `# key = value [published|implementation]` lines for every field, followed by the
/// generator version and random-number algorithm.
std::string describe(const ScenarioConfig& cfg);

}  // namespace oceansim
