#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "json.hpp"

#include "hetsched/engine.hpp"
#include "hetsched/metrics.hpp"

namespace hetsched {

inline constexpr const char* kToolVersion = "hetsched 0.1.0";

/// Deterministic shortest-ish decimal rendering used by every CSV writer.
std::string format_double(double v);

/// FNV-1a over the canonical scenario document; recorded in every output.
std::uint64_t scenario_hash(const ScenarioConfig& cfg);

/// The comment line carried by all CSV outputs: tool version, seed, scenario hash.
std::string csv_meta_line(const ScenarioConfig& cfg);

void write_trace_csv(std::ostream& os, const RunTrace& trace, const ScenarioConfig& cfg);
void write_overheads_csv(std::ostream& os, const OverheadReport& report,
                         const ScenarioConfig& cfg);
void write_energy_csv(std::ostream& os, const EnergyReport& report, const ScenarioConfig& cfg);

nlohmann::json trace_to_json(const RunTrace& trace, const ScenarioConfig& cfg);
nlohmann::json overheads_to_json(const OverheadReport& report);
nlohmann::json energy_to_json(const EnergyReport& report);

}  // namespace hetsched
