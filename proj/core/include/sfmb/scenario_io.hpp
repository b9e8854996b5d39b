#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "sfmb/params.hpp"

namespace sfmb {

/// Ordered key -> raw value pairs, as written in a scenario file.
using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines. '#' starts a comment. Duplicate keys are rejected.
KeyValues parse_key_values(const std::string& text);

/// Builds a scenario from unit-suffixed keys (tau2_ps, n_per_cm3, r_um, ...).
/// Unknown keys, missing physics keys and malformed numbers raise ConfigError.
Scenario scenario_from_key_values(const KeyValues& values);

/// Inverse of scenario_from_key_values, at full double precision.
KeyValues scenario_to_key_values(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& path);
std::string format_key_values(const KeyValues& values);

}  // namespace sfmb
