#pragma once

#include <vector>

#include "hetsched/engine.hpp"

namespace hetsched {

/// The five offload-overhead ratios, each a fraction of total execution time.
struct OverheadReport {
    double o_sp = 0;  // scheduling and partitioning  sum(tc2 - tc1) / T
    double o_hd = 0;  // host-to-device               sum(tg2 - tg1) / T
    double o_kl = 0;  // kernel launch                sum(tg3 - tg2) / T
    double o_dh = 0;  // device-to-host               sum(tg5 - tg4) / T
    double o_td = 0;  // thread dispatch              sum((tc3 - tc2) - (tg5 - tg1)) / T
    double total_time_ms = 0;
};

/// Reduce a completed trace to the overhead ratios. Throws InvalidTrace for a
/// zero-duration trace.
OverheadReport overheads(const RunTrace& trace);

struct PowerSample {
    double t_ms = 0;
    double big_w = 0, little_w = 0, gpu_w = 0, memory_w = 0;
};

struct PowerTrace {
    std::vector<PowerSample> samples;  // strictly increasing timestamps
};

struct EnergyReport {
    double big_j = 0, little_j = 0, gpu_j = 0, memory_j = 0;
    double total_j = 0;
    double edp_j_s = 0;  // total_j * total time in seconds
    double total_time_ms = 0;
};

/// Per-rail instantaneous power over a completed run, with sensor staleness:
/// readings refresh only every sensor_refresh_ms, so two queries inside one
/// refresh window return the same value.
class PowerProbe {
public:
    PowerProbe(const RunTrace& trace, const ScenarioConfig& cfg);

    PowerSample instantaneous(double t_ms) const;
    PowerSample sampled(double t_ms) const;  // staleness-held sensor reading

private:
    bool busy_at(const std::vector<BusyInterval>& intervals, double t) const;

    const ScenarioConfig& cfg_;
    std::vector<BusyInterval> gpu_busy_;
    std::vector<BusyInterval> memory_busy_;
    std::vector<std::vector<BusyInterval>> core_busy_;
    std::vector<DeviceId> cores_;
};

/// Sample the run at the configured rate (left endpoints of each period).
PowerTrace build_power_trace(const RunTrace& trace, const ScenarioConfig& cfg);

/// Left-rectangle integration: each sample's power times the sampling period.
/// duration_ms < 0 means "derive from sample count". Throws InvalidTrace for
/// non-monotonic timestamps.
EnergyReport integrate_energy(const PowerTrace& power, double rate_hz,
                              double duration_ms = -1.0);

/// Full energy/EDP report for a completed run.
EnergyReport energy_report(const RunTrace& trace, const ScenarioConfig& cfg);

struct CompareRow {
    double time_ratio = 1, energy_ratio = 1, edp_ratio = 1;
    double time_reduction_pct = 0, energy_reduction_pct = 0, edp_reduction_pct = 0;
};

/// Candidate metrics normalized against a baseline (ratios < 1 mean better).
CompareRow compare_report(double baseline_time_ms, double baseline_energy_j,
                          double candidate_time_ms, double candidate_energy_j);

}  // namespace hetsched
