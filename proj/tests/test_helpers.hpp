#pragma once

#include <filesystem>
#include <vector>

#include "hetsched/engine.hpp"
#include "hetsched/scenario.hpp"

namespace hetsched::testing {

/// Small scenario with friendly round numbers and zero overheads: flat GPU
/// curve at 10 it/ms, CPU cores at 10 it/ms, no transfer/launch/dispatch costs.
inline ScenarioConfig toy_scenario() {
    ScenarioConfig cfg;
    cfg.name = "toy";
    cfg.space = {0, 1000};
    cfg.time_steps = 1;
    cfg.scheduler = SchedulerKind::Dynamic;
    cfg.gpu_chunk = 100;
    cfg.n_workers = 1;
    cfg.dispatch.kind = DispatchKind::WakeupPriorityBoost;
    cfg.dispatch.base_dispatch_latency_ms = 0.0;
    cfg.dispatch.preemption_cost_ms = 0.0;
    cfg.gpu.num_eu = 4;
    cfg.gpu.preferred_multiple = 8;
    cfg.gpu.curve = ThroughputCurve({{1.0, 10.0}, {10000.0, 10.0}});
    cfg.gpu.power_active_w = 5.0;
    cfg.gpu.power_idle_w = 1.0;
    cfg.n_big_cores = 2;
    cfg.big_core.cls = DeviceClass::BigCore;
    cfg.big_core.rate_iters_per_ms = 10.0;
    cfg.big_core.power_active_w = 3.0;
    cfg.big_core.power_idle_w = 0.5;
    cfg.little_core.cls = DeviceClass::LittleCore;
    cfg.partitioner.min_cpu_chunk = 1;
    cfg.power.sensor_refresh_ms = 1.0;
    cfg.sched_partition_cost_ms = 0.0;
    return cfg;
}

inline std::filesystem::path preset_dir() { return HETSCHED_PRESET_PATH; }
inline std::filesystem::path suite_dir() { return HETSCHED_SUITE_PATH; }

inline ScenarioConfig load_preset(const std::string& name) {
    return load_scenario_file(preset_dir() / (name + ".json"), preset_dir());
}

}  // namespace hetsched::testing
