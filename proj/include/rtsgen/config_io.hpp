#pragma once

// JSON forms of the game config and the study config. Absent fields keep
// their built-in defaults, so a config file only has to name what it
// changes; a present "unitTypes" array replaces the whole stat table.

#include <string>

#include "rtsgen/engine.hpp"
#include "rtsgen/study.hpp"

namespace rtsgen {

GameConfig config_from_json(const std::string& text);
std::string config_to_json(const GameConfig& cfg);
GameConfig load_config_file(const std::string& path);

// Overlays "engine", "agents" (per skill), "gamesPerUnit", "redoThreshold",
// "alternateCorners" and "typeDefaults" onto an existing study config.
void apply_study_overrides(StudyConfig& cfg, const std::string& jsonText);
StudyConfig load_study_config(const std::string& path);

}  // namespace rtsgen
