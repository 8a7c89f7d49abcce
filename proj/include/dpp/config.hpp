#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpp/presets.hpp"

namespace dpp {

inline constexpr int kSchemaVersion = 1;

// Full configuration tree for a run, schema_version included. Serialization
// is canonical: keys sorted, shortest round-trip numbers, so equal configs
// produce byte-equal text.
nlohmann::json preset_to_json(const Preset& ps);

// Strict parse of a complete tree: every key checked, unknown keys are
// errors, schema_version must match.
Preset preset_from_json(const nlohmann::json& j);

// Layered assembly: preset defaults, then a (possibly partial) config file
// tree, then dotted-path overrides like "train.lr=5e-4". The file may name
// its own base via a "preset" key; an explicit preset argument wins. Throws
// ConfigError on unknown keys, type mismatches, or paths that do not exist.
struct ResolvedConfig {
  Preset preset;
  nlohmann::json tree;  // the merged, reparseable configuration
};
ResolvedConfig resolve_config(const std::optional<std::string>& preset_name,
                              const std::optional<std::string>& config_text,
                              const std::vector<std::string>& overrides);

}  // namespace dpp
