#pragma once

#include <string>
#include <vector>

#include "hetsched/engine.hpp"
#include "hetsched/metrics.hpp"
#include "hetsched/partitioner.hpp"
#include "hetsched/scenario.hpp"

namespace hetsched {

struct SweepRow {
    int percent = 0;
    double time_ms = 0;
    double energy_j = 0;
    double edp_j_s = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    int best_percent = 0;  // minimizes time; ties go to the smaller percentage
};

/// Bulk-Oracle exhaustive search: run the engine once per percentage in
/// {0, step, ..., 100} and keep the fastest static split.
SweepResult bulk_oracle_search(const ScenarioConfig& scenario, int step_percent);

struct ScenarioMetrics {
    std::string name;
    double time_ms = 0;
    double energy_j = 0;
    double edp_j_s = 0;
    OverheadReport overheads;
};

struct CompareResult {
    std::string baseline;
    std::vector<ScenarioMetrics> absolute;
    std::vector<CompareRow> normalized;  // aligned with `absolute`
};

/// Run every suite scenario and normalize the metrics against the baseline.
CompareResult run_compare(const ExperimentSuite& suite);

/// Offline training against the scenario's GPU model (effective throughput probe).
TrainingResult train_scenario(const ScenarioConfig& scenario);

}  // namespace hetsched
