#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetsched/core.hpp"
#include "hetsched/devices.hpp"
#include "hetsched/os_model.hpp"
#include "hetsched/partitioner.hpp"

namespace hetsched {

enum class SchedulerKind { Dynamic, BulkOracle };

struct PartitionerConfig {
    iter_t min_cpu_chunk = 64;
    double bootstrap_fraction = 0.25;
    double train_epsilon = 0.02;
    int train_patience = 2;
};

struct PowerConfig {
    double sample_rate_hz = 10.0;
    double sensor_refresh_ms = 260.0;  // sensor readings are held this long
    double memory_baseline_w = 0.0;
    double memory_transfer_w = 0.0;    // added while a transfer is in flight
};

struct SamplerConfig {
    bool enabled = false;          // power-sampling thread pinned to a little core
    double utilization = 0.005;    // fraction of its core it consumes
};

struct HostConfig {
    ThreadPriority priority = ThreadPriority::Normal;
    std::optional<DeviceId> pin;
};

struct ScenarioConfig {
    std::string name = "scenario";
    IterationSpace space;
    int time_steps = 1;
    std::uint64_t seed = 0;

    SchedulerKind scheduler = SchedulerKind::Dynamic;
    int gpu_percent = 0;     // BulkOracle only
    iter_t gpu_chunk = 1;    // G, the trained GPU chunk size

    int n_workers = 0;
    DispatchPolicy dispatch;
    HostConfig host;

    GpuModel gpu;
    int n_big_cores = 0;
    CpuCoreModel big_core;
    int n_little_cores = 0;
    CpuCoreModel little_core;

    PartitionerConfig partitioner;
    PowerConfig power;
    SamplerConfig sampler;

    double sched_partition_cost_ms = 0.005;  // host-side Filter1 cost per GPU chunk
};

/// Throws ConfigError if the scenario cannot run.
void validate(const ScenarioConfig& cfg);

std::vector<DeviceId> core_inventory(const ScenarioConfig& cfg);
const CpuCoreModel& core_model(const ScenarioConfig& cfg, DeviceClass cls);

struct GpuChunkRecord {
    int step = 0;
    std::int64_t interval = 0;
    iter_t begin = 0, end = 0;
    double tc1 = 0, tc2 = 0, tc3 = 0;
    double tg1 = 0, tg2 = 0, tg3 = 0, tg4 = 0, tg5 = 0;
    iter_t size() const { return end - begin; }
};

struct CpuChunkRecord {
    int step = 0;
    DeviceId device;
    std::int64_t interval = 0;
    iter_t begin = 0, end = 0;
    double start_ms = 0, end_ms = 0;
    iter_t size() const { return end - begin; }
};

struct BusyInterval {
    double start_ms = 0, end_ms = 0;
};

struct RunTrace {
    std::vector<GpuChunkRecord> gpu_chunks;
    std::vector<CpuChunkRecord> cpu_chunks;
    std::vector<BusyInterval> gpu_busy;
    std::vector<BusyInterval> memory_busy;               // transfer windows
    std::vector<std::vector<BusyInterval>> core_busy;    // indexed by core inventory order
    std::vector<double> step_end_ms;
    double total_time_ms = 0.0;
    iter_t space_size = 0;
    int time_steps = 0;
    std::vector<std::string> warnings;
};

/// Shared Filter1 state machine: selects the device and extracts a chunk from
/// the remaining range. Used verbatim by both backends; callers provide
/// mutual exclusion (the simulator is single-threaded, the real-thread
/// backend holds a dispatcher lock).
class SchedulerCore {
public:
    explicit SchedulerCore(const ScenarioConfig& cfg);

    /// Reset the remaining range for a new time step. Rate history carries over.
    void begin_step();

    /// Filter1. The GPU side passes gpu_idle = true and its own device id; a
    /// worker passes the core it runs on plus its stable agent index. Returns
    /// nothing once the source range for that requester is exhausted.
    std::optional<Token> filter1(bool gpu_idle, DeviceId cpu_core, int agent);

    /// Filter2 feedback: record the measured sample for the agent that
    /// processed the chunk (agent -1 = the GPU/host side).
    void record(const ThroughputSample& sample, int agent);

    const PartitionerState& state() const { return state_; }
    iter_t total_extracted() const { return total_extracted_; }

private:
    std::optional<Token> pull_dynamic_gpu();
    std::optional<Token> pull_dynamic_cpu(DeviceId core, int agent);

    const ScenarioConfig& cfg_;
    PartitionerState state_;
    // Bulk-Oracle sources: one GPU block, one static block per worker.
    IterationSpace bulk_gpu_;
    std::vector<IterationSpace> bulk_worker_;
    std::int64_t gpu_interval_ = 0;
    std::unordered_map<int, std::int64_t> cpu_interval_;
    iter_t total_extracted_ = 0;
};

struct FilterOutcome {
    bool is_gpu = false;
    OffloadTimeline timeline;  // GPU tokens only
    double elapsed_ms = 0.0;   // device wall time (GPU: tg5 - tg1)
    ThroughputSample sample;
};

/// Filter2 for the simulator: process the chunk on its device model starting
/// at `start_ms` and produce the completion times plus the throughput sample.
FilterOutcome filter2(const Token& token, const ScenarioConfig& cfg, double start_ms);

/// Run the scenario on the deterministic discrete-event backend.
RunTrace run(const ScenarioConfig& cfg);

struct RealThreadOptions {
    double wakeup_latency_ms = 5.0;  // injected host wakeup latency after each offload
    bool spin_workers = false;       // busy-spin instead of clock-paced sleeping
};

/// Run the scenario with genuine OS threads and a stub device whose phase
/// latencies come from the GPU model. Scheduling code paths are shared with
/// the simulator; timing is wall-clock and therefore non-deterministic.
RunTrace run_real_threads(const ScenarioConfig& cfg, const RealThreadOptions& opts = {});

}  // namespace hetsched
