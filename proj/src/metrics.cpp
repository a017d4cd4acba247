#include "hetsched/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "hetsched/errors.hpp"

namespace hetsched {

OverheadReport overheads(const RunTrace& trace) {
    if (trace.total_time_ms <= 0.0) {
        throw InvalidTrace("cannot compute overheads of a zero-duration trace");
    }
    OverheadReport r;
    r.total_time_ms = trace.total_time_ms;
    for (const GpuChunkRecord& c : trace.gpu_chunks) {
        r.o_sp += c.tc2 - c.tc1;
        r.o_hd += c.tg2 - c.tg1;
        r.o_kl += c.tg3 - c.tg2;
        r.o_dh += c.tg5 - c.tg4;
        r.o_td += (c.tc3 - c.tc2) - (c.tg5 - c.tg1);
    }
    r.o_sp /= trace.total_time_ms;
    r.o_hd /= trace.total_time_ms;
    r.o_kl /= trace.total_time_ms;
    r.o_dh /= trace.total_time_ms;
    r.o_td /= trace.total_time_ms;
    return r;
}

PowerProbe::PowerProbe(const RunTrace& trace, const ScenarioConfig& cfg)
    : cfg_(cfg),
      gpu_busy_(trace.gpu_busy),
      memory_busy_(trace.memory_busy),
      core_busy_(trace.core_busy),
      cores_(core_inventory(cfg)) {
    // Transfer windows may interleave between offloads; keep them sorted.
    std::sort(memory_busy_.begin(), memory_busy_.end(),
              [](const BusyInterval& a, const BusyInterval& b) { return a.start_ms < b.start_ms; });
}

bool PowerProbe::busy_at(const std::vector<BusyInterval>& intervals, double t) const {
    auto it = std::upper_bound(intervals.begin(), intervals.end(), t,
                               [](double v, const BusyInterval& b) { return v < b.start_ms; });
    if (it == intervals.begin()) return false;
    --it;
    return t < it->end_ms;
}

PowerSample PowerProbe::instantaneous(double t_ms) const {
    PowerSample s;
    s.t_ms = t_ms;
    for (std::size_t i = 0; i < cores_.size(); ++i) {
        const CpuCoreModel& m = core_model(cfg_, cores_[i].cls);
        const double w = device_power_w(m, busy_at(core_busy_[i], t_ms));
        (cores_[i].cls == DeviceClass::BigCore ? s.big_w : s.little_w) += w;
    }
    s.gpu_w = device_power_w(cfg_.gpu, busy_at(gpu_busy_, t_ms));
    s.memory_w = cfg_.power.memory_baseline_w;
    if (busy_at(memory_busy_, t_ms)) {
        s.memory_w += cfg_.power.memory_transfer_w;
    }
    return s;
}

PowerSample PowerProbe::sampled(double t_ms) const {
    const double refresh = cfg_.power.sensor_refresh_ms;
    const double held_t = std::floor(t_ms / refresh) * refresh;
    PowerSample s = instantaneous(held_t);
    s.t_ms = t_ms;
    return s;
}

PowerTrace build_power_trace(const RunTrace& trace, const ScenarioConfig& cfg) {
    const PowerProbe probe(trace, cfg);
    const double period_ms = 1000.0 / cfg.power.sample_rate_hz;
    PowerTrace out;
    for (double t = 0.0; t < trace.total_time_ms; t += period_ms) {
        out.samples.push_back(probe.sampled(t));
    }
    if (out.samples.empty() && trace.total_time_ms > 0.0) {
        out.samples.push_back(probe.sampled(0.0));
    }
    return out;
}

EnergyReport integrate_energy(const PowerTrace& power, double rate_hz, double duration_ms) {
    if (rate_hz <= 0.0) throw ConfigError("sampling rate must be > 0");
    for (std::size_t i = 1; i < power.samples.size(); ++i) {
        if (power.samples[i].t_ms <= power.samples[i - 1].t_ms) {
            throw InvalidTrace("power trace timestamps must be strictly increasing");
        }
    }
    const double period_s = 1.0 / rate_hz;
    EnergyReport r;
    for (const PowerSample& s : power.samples) {
        r.big_j += s.big_w * period_s;
        r.little_j += s.little_w * period_s;
        r.gpu_j += s.gpu_w * period_s;
        r.memory_j += s.memory_w * period_s;
    }
    r.total_j = r.big_j + r.little_j + r.gpu_j + r.memory_j;
    r.total_time_ms =
        duration_ms >= 0.0 ? duration_ms : static_cast<double>(power.samples.size()) * 1000.0 * period_s;
    r.edp_j_s = r.total_j * (r.total_time_ms / 1000.0);
    return r;
}

EnergyReport energy_report(const RunTrace& trace, const ScenarioConfig& cfg) {
    const PowerTrace power = build_power_trace(trace, cfg);
    return integrate_energy(power, cfg.power.sample_rate_hz, trace.total_time_ms);
}

CompareRow compare_report(double baseline_time_ms, double baseline_energy_j,
                          double candidate_time_ms, double candidate_energy_j) {
    if (baseline_time_ms <= 0.0 || baseline_energy_j <= 0.0) {
        throw InvalidTrace("comparison baseline must have positive time and energy");
    }
    CompareRow row;
    row.time_ratio = candidate_time_ms / baseline_time_ms;
    row.energy_ratio = candidate_energy_j / baseline_energy_j;
    row.edp_ratio = row.time_ratio * row.energy_ratio;
    row.time_reduction_pct = 100.0 * (1.0 - row.time_ratio);
    row.energy_reduction_pct = 100.0 * (1.0 - row.energy_ratio);
    row.edp_reduction_pct = 100.0 * (1.0 - row.edp_ratio);
    return row;
}

}  // namespace hetsched
