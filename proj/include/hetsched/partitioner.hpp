#pragma once

#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hetsched/core.hpp"

namespace hetsched {

/// One completed scheduling interval: the chunk a device processed and the
/// wall time it took. For GPU samples the elapsed time covers host-to-device,
/// launch, execution and device-to-host.
struct ThroughputSample {
    DeviceId device;
    iter_t chunk_size = 0;
    double elapsed_ms = 0.0;
    double lambda = 0.0;  // iterations per ms
};

/// Rate of one interval: chunk_size / elapsed. Throws InvalidMeasurement for
/// non-positive elapsed times.
double throughput(iter_t chunk_size, double elapsed_ms);

ThroughputSample make_sample(DeviceId device, iter_t chunk_size, double elapsed_ms);

/// Mutable partitioning state: the trained GPU chunk size, the most recent
/// throughput of the GPU and of each requesting CPU agent, and the remaining
/// iteration range. Only one dispatcher mutates it at a time; the type itself
/// carries no synchronization.
struct PartitionerState {
    iter_t gpu_chunk = 1;  // G
    std::optional<double> last_lambda_gpu;
    std::unordered_map<int, double> last_lambda_cpu;  // keyed by requesting agent
    iter_t min_cpu_chunk = 64;
    double bootstrap_fraction = 0.25;  // first CPU chunk = fraction of G
    IterationSpace remaining;
};

/// CPU chunk size for the next interval of `agent`:
/// clamp(round(G * lambda_C / lambda_G), min_cpu_chunk, remaining). Before
/// both rates exist the bootstrap fraction of G is used instead. Rounding is
/// half away from zero; the lower clamp never exceeds the remaining range.
iter_t next_cpu_chunk(const PartitionerState& state, int agent);

/// GPU chunks stay at the trained size until the tail: min(G, remaining).
iter_t next_gpu_chunk(const PartitionerState& state);

struct TrainingConfig {
    int num_compute_units = 1;
    int preferred_multiple = 1;
    int patience = 2;           // probes that may fail to improve before stopping
    double epsilon = 0.02;      // relative improvement below this counts as stable
    int max_probes = 256;       // safety cap; the stop rule normally fires first
};

/// Smallest chunk that occupies every compute unit once:
/// num_compute_units * preferred_multiple.
iter_t initial_gpu_chunk(const TrainingConfig& cfg);

struct TrainingResult {
    iter_t chosen = 0;
    std::vector<std::pair<iter_t, double>> probes;  // (chunk size, measured lambda)
};

/// Offline GPU chunk-size search. Probes multiples of the initial chunk and
/// stops after `patience` consecutive probes fail to beat the best observed
/// throughput by more than epsilon; the probed size with the highest
/// throughput wins. A throwing probe aborts the session with the best result
/// so far attached (TrainingAborted).
TrainingResult train_gpu_chunk(const std::function<double(iter_t)>& probe,
                               const TrainingConfig& cfg);

/// Static split for the Bulk-Oracle baseline: the GPU takes the first
/// round(size * percent / 100) iterations, the CPU cores take the rest.
std::pair<IterationSpace, IterationSpace> bulk_oracle_split(IterationSpace space,
                                                            int gpu_percent);

}  // namespace hetsched
