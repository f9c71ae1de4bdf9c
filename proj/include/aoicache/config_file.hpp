#pragma once

#include <stdexcept>
#include <string>

#include "aoicache/scenario.hpp"

namespace aoicache {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line-oriented config format: `[section]` headers, `key = value` lines, `#`
// comments. An empty file yields the default scenario. Unknown sections or
// keys are rejected with the offending line number; invariant violations are
// reported by name. See README for the full schema.
ScenarioConfig parse_config_text(const std::string& text,
                                 const std::string& origin = "<config>");
ScenarioConfig parse_config_file(const std::string& path);

/// Serializes a config back into the file format (round-trips through
/// parse_config_text).
std::string config_to_text(const ScenarioConfig& config);

}  // namespace aoicache
