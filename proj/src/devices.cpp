#include "hetsched/devices.hpp"

#include <algorithm>
#include <cmath>

#include "hetsched/errors.hpp"

namespace hetsched {

ThroughputCurve::ThroughputCurve(std::vector<std::pair<double, double>> anchors)
    : anchors_(std::move(anchors)) {
    if (anchors_.size() < 2) {
        throw ConfigError("throughput curve needs at least 2 anchors");
    }
    for (std::size_t i = 0; i < anchors_.size(); ++i) {
        if (anchors_[i].second <= 0.0) {
            throw ConfigError("throughput curve anchors must have positive throughput");
        }
        if (i > 0 && anchors_[i].first <= anchors_[i - 1].first) {
            throw ConfigError("throughput curve anchor sizes must be strictly increasing");
        }
    }
    peak_ = 0.0;
    for (const auto& [size, lambda] : anchors_) {
        peak_ = std::max(peak_, lambda);
    }
}

double ThroughputCurve::operator()(double chunk_size) const {
    if (anchors_.empty()) {
        throw ConfigError("throughput curve is empty");
    }
    if (chunk_size <= anchors_.front().first) {
        return anchors_.front().second;
    }
    if (chunk_size >= anchors_.back().first) {
        return anchors_.back().second;
    }
    auto hi = std::upper_bound(anchors_.begin(), anchors_.end(), chunk_size,
                               [](double s, const auto& a) { return s < a.first; });
    auto lo = hi - 1;
    const double t = (chunk_size - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

OffloadTimeline gpu_offload_timeline(const GpuModel& model, iter_t chunk_size, double start_ms) {
    const double bytes = static_cast<double>(chunk_size) * model.bytes_per_iteration;
    OffloadTimeline t;
    t.tg1 = start_ms;
    t.tg2 = t.tg1 + model.h2d(bytes);
    t.tg3 = t.tg2 + model.launch_latency_ms;
    t.tg4 = t.tg3 + static_cast<double>(chunk_size) / model.curve(static_cast<double>(chunk_size));
    t.tg5 = t.tg4 + model.d2h(bytes);
    return t;
}

double gpu_effective_throughput(const GpuModel& model, iter_t chunk_size) {
    const OffloadTimeline t = gpu_offload_timeline(model, chunk_size, 0.0);
    return static_cast<double>(chunk_size) / (t.tg5 - t.tg1);
}

GpuHwMetrics gpu_hw_metrics(const GpuModel& model, iter_t chunk_size) {
    const double size = static_cast<double>(chunk_size);
    const double knee =
        static_cast<double>(model.num_eu) * model.preferred_multiple * model.fill_factor;
    const double rel = model.curve(size) / model.curve.peak();  // in (0, 1]

    GpuHwMetrics m;
    m.eu_idle = model.idle_cap * std::max(0.0, 1.0 - size / knee);
    m.eu_stalled = (1.0 - m.eu_idle) * (1.0 - rel);
    m.eu_active = 1.0 - m.eu_idle - m.eu_stalled;
    // Miss count scales with the cache lines touched and the throughput decay.
    m.l3_misses = size * model.bytes_per_iteration / 64.0 * (1.0 - rel);
    return m;
}

double cpu_chunk_time(const CpuCoreModel& model, iter_t chunk_size) {
    double rate = model.rate_iters_per_ms;
    if (chunk_size < model.min_chunk_threshold) {
        rate *= model.sub_threshold_penalty;
    }
    return static_cast<double>(chunk_size) / rate;
}

double device_power_w(const GpuModel& model, bool busy) {
    return busy ? model.power_active_w : model.power_idle_w;
}

double device_power_w(const CpuCoreModel& model, bool busy) {
    return busy ? model.power_active_w : model.power_idle_w;
}

}  // namespace hetsched
