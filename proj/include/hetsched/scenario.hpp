#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "hetsched/engine.hpp"

namespace hetsched {

/// Parse a scenario document. Unknown keys are rejected; a "preset" key pulls
/// the named preset file in first and applies the rest of the document on top
/// (JSON merge patch semantics).
ScenarioConfig scenario_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& preset_dir = {});

/// Canonical document for a config; re-parsing it reproduces the config.
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

/// Preset search path: HETSCHED_PRESET_DIR when set, else ./presets.
std::filesystem::path default_preset_dir();

ScenarioConfig load_scenario_file(const std::filesystem::path& file,
                                  const std::filesystem::path& preset_dir = {});

/// Apply the "W+1" thread-count label: W workers plus the host thread.
void apply_thread_flag(ScenarioConfig& cfg, const std::string& flag);

struct ExperimentSuite {
    std::string baseline;
    std::vector<ScenarioConfig> scenarios;
};

/// Suite document: {"baseline": <name>, "scenarios": [...]}. Scenario names
/// must be unique and the baseline must be among them.
ExperimentSuite load_suite_file(const std::filesystem::path& file,
                                const std::filesystem::path& preset_dir = {});

}  // namespace hetsched
