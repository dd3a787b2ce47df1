#pragma once

#include <stdexcept>
#include <string>

#include "mprsim/engine.hpp"

namespace mprsim {

// Parse or validation failure, anchored to a config line where possible
// ("file:line: message").
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Plain-text key/value scenario format (docs/formats.md). '#' starts a
// comment; keys are dotted paths mirroring ScenarioConfig.
ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin = "<string>");
ScenarioConfig load_scenario_file(const std::string& path);

// Canonical dump with every resolved key, defaults applied. Re-parsing the
// dump yields an identical resolved scenario.
std::string format_scenario(const ScenarioConfig& cfg);

} // namespace mprsim
