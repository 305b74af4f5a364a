#pragma once

#include <string>

#include <json.hpp>

#include "mcsim/simulator.hpp"

namespace mcsim {

// Parses an experiment description. Every key is optional and defaults to
// the baseline parameter set (see README); unknown keys are hard errors so
// typos cannot silently fall back to defaults.
ExperimentConfig parse_config(const nlohmann::json& j);

// Reads and parses a JSON config file. Throws ConfigError with the file
// name on unreadable files or malformed JSON.
ExperimentConfig load_config(const std::string& path);

// Canonical JSON echo of a fully resolved configuration (key-sorted, all
// defaults filled in). Used for the CSV header so outputs are reproducible
// byte for byte.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

} // namespace mcsim
