#pragma once

#include <utility>
#include <vector>

#include "hetsched/core.hpp"

namespace hetsched {

/// Affine cost in milliseconds as a function of transferred bytes.
struct AffineCostMs {
    double alpha_ms = 0.0;
    double beta_ms_per_byte = 0.0;

    double operator()(double bytes) const { return alpha_ms + beta_ms_per_byte * bytes; }
};

/// Kernel-only GPU throughput (iterations/ms) as a piecewise-linear function
/// of chunk size. Anchors must have strictly increasing sizes and positive
/// throughputs; evaluation is flat beyond the first and last anchors.
class ThroughputCurve {
public:
    ThroughputCurve() = default;
    explicit ThroughputCurve(std::vector<std::pair<double, double>> anchors);

    double operator()(double chunk_size) const;
    double peak() const { return peak_; }
    const std::vector<std::pair<double, double>>& anchors() const { return anchors_; }

private:
    std::vector<std::pair<double, double>> anchors_;
    double peak_ = 0.0;
};

struct GpuModel {
    int num_eu = 1;
    int preferred_multiple = 1;
    AffineCostMs h2d;
    AffineCostMs d2h;
    double launch_latency_ms = 0.0;
    ThroughputCurve curve;
    double bytes_per_iteration = 0.0;
    double power_active_w = 0.0;
    double power_idle_w = 0.0;
    // Shape parameters for the emulated hardware metrics. The EUs count as
    // filled once the chunk reaches num_eu * preferred_multiple * fill_factor.
    double fill_factor = 2.0;
    double idle_cap = 0.85;
};

struct CpuCoreModel {
    DeviceClass cls = DeviceClass::BigCore;
    double rate_iters_per_ms = 1.0;      // constant above min_chunk_threshold
    iter_t min_chunk_threshold = 1;
    double sub_threshold_penalty = 0.5;  // rate multiplier below the threshold
    double power_active_w = 0.0;
    double power_idle_w = 0.0;
};

/// Cycle-ratio partition of the GPU execution units plus a modeled L3 miss count.
struct GpuHwMetrics {
    double eu_active = 0.0;
    double eu_idle = 0.0;
    double eu_stalled = 0.0;
    double l3_misses = 0.0;
};

/// Device-side timestamps of one offload: transfer in, launch, execute, transfer out.
struct OffloadTimeline {
    double tg1 = 0.0;  // host-to-device begins
    double tg2 = 0.0;  // kernel launch begins
    double tg3 = 0.0;  // kernel execution begins
    double tg4 = 0.0;  // device-to-host begins
    double tg5 = 0.0;  // offload complete
};

/// Sequential phase timeline of offloading `chunk_size` iterations starting at `start_ms`.
OffloadTimeline gpu_offload_timeline(const GpuModel& model, iter_t chunk_size, double start_ms);

/// Iterations/ms of a standalone offload, transfers and launch included.
double gpu_effective_throughput(const GpuModel& model, iter_t chunk_size);

/// Deterministic EU active/idle/stalled ratios consistent with the throughput
/// curve: idle dominates below the fill knee, stalls grow as the curve decays
/// from its peak (the modeled L3-miss regime).
GpuHwMetrics gpu_hw_metrics(const GpuModel& model, iter_t chunk_size);

/// Wall milliseconds for one CPU chunk. Below the threshold the core rate is
/// scaled by the sub-threshold penalty factor.
double cpu_chunk_time(const CpuCoreModel& model, iter_t chunk_size);

double device_power_w(const GpuModel& model, bool busy);
double device_power_w(const CpuCoreModel& model, bool busy);

}  // namespace hetsched
