#include "hetsched/sweep.hpp"

#include "hetsched/errors.hpp"

namespace hetsched {

SweepResult bulk_oracle_search(const ScenarioConfig& scenario, int step_percent) {
    if (step_percent <= 0 || 100 % step_percent != 0) {
        throw ConfigError("sweep step must divide 100");
    }
    SweepResult result;
    double best_time = 0.0;
    bool first = true;
    for (int pct = 0; pct <= 100; pct += step_percent) {
        ScenarioConfig variant = scenario;
        variant.scheduler = SchedulerKind::BulkOracle;
        variant.gpu_percent = pct;
        if (variant.n_workers == 0 && pct < 100 && !variant.space.empty()) {
            continue;  // static CPU share with nobody to run it
        }
        const RunTrace trace = run(variant);
        const EnergyReport energy = energy_report(trace, variant);
        result.rows.push_back({pct, trace.total_time_ms, energy.total_j, energy.edp_j_s});
        if (first || trace.total_time_ms < best_time) {
            first = false;
            best_time = trace.total_time_ms;
            result.best_percent = pct;
        }
    }
    if (first) {
        throw ConfigError("bulk-oracle sweep produced no runnable percentage");
    }
    return result;
}

CompareResult run_compare(const ExperimentSuite& suite) {
    CompareResult result;
    result.baseline = suite.baseline;
    for (const ScenarioConfig& scenario : suite.scenarios) {
        const RunTrace trace = run(scenario);
        const EnergyReport energy = energy_report(trace, scenario);
        ScenarioMetrics m;
        m.name = scenario.name;
        m.time_ms = trace.total_time_ms;
        m.energy_j = energy.total_j;
        m.edp_j_s = energy.edp_j_s;
        m.overheads = overheads(trace);
        result.absolute.push_back(m);
    }
    const ScenarioMetrics* base = nullptr;
    for (const ScenarioMetrics& m : result.absolute) {
        if (m.name == suite.baseline) base = &m;
    }
    if (!base) throw ConfigError("baseline scenario missing from suite results");
    for (const ScenarioMetrics& m : result.absolute) {
        result.normalized.push_back(
            compare_report(base->time_ms, base->energy_j, m.time_ms, m.energy_j));
    }
    return result;
}

TrainingResult train_scenario(const ScenarioConfig& scenario) {
    TrainingConfig tc;
    tc.num_compute_units = scenario.gpu.num_eu;
    tc.preferred_multiple = scenario.gpu.preferred_multiple;
    tc.patience = scenario.partitioner.train_patience;
    tc.epsilon = scenario.partitioner.train_epsilon;
    auto probe = [&](iter_t size) { return gpu_effective_throughput(scenario.gpu, size); };
    return train_gpu_chunk(probe, tc);
}

}  // namespace hetsched
