#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "spatial/scenario.hpp"

namespace spatial {

// Scenario files are JSON objects. Locations are given either as a distance
// matrix or as coordinates (Euclidean distances are derived). Unknown keys
// and type mismatches raise ConfigError; invariants are left to
// validate_scenario.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& c);

ScenarioConfig read_scenario_file(const std::filesystem::path& path);
void write_scenario_file(const std::filesystem::path& path, const ScenarioConfig& c);

const char* to_string(RateMode mode);
RateMode parse_rate_mode(const std::string& name);

}  // namespace spatial
