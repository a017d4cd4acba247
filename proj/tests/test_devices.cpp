#include <random>

#include "doctest.h"

#include "hetsched/devices.hpp"
#include "hetsched/errors.hpp"

using namespace hetsched;

namespace {

// Shape from the default desktop preset: rising below 640, near-flat to 1280,
// decaying sharply beyond.
GpuModel desktop_like_gpu() {
    GpuModel gpu;
    gpu.num_eu = 20;
    gpu.preferred_multiple = 16;
    gpu.launch_latency_ms = 1.0;
    gpu.h2d = {0.02, 1.0e-6};
    gpu.d2h = {0.015, 6.0e-7};
    gpu.bytes_per_iteration = 16.0;
    gpu.curve = ThroughputCurve(
        {{320, 30}, {640, 46}, {1280, 41}, {2048, 27.2}, {2560, 21}, {5120, 7}, {10240, 3.6}});
    return gpu;
}

}  // namespace

TEST_CASE("curve reproduces anchors exactly and interpolates between them") {
    const ThroughputCurve curve({{100, 10}, {200, 30}, {400, 20}});
    CHECK(curve(100) == doctest::Approx(10).epsilon(1e-12));
    CHECK(curve(200) == doctest::Approx(30).epsilon(1e-12));
    CHECK(curve(400) == doctest::Approx(20).epsilon(1e-12));
    CHECK(curve(150) == doctest::Approx(20));
    CHECK(curve(300) == doctest::Approx(25));
    // flat extrapolation
    CHECK(curve(10) == doctest::Approx(10));
    CHECK(curve(4000) == doctest::Approx(20));
}

TEST_CASE("curve evaluation is continuous at anchors") {
    const ThroughputCurve curve({{96, 6}, {1536, 16.9}, {1824, 13}});
    for (double s : {96.0, 1536.0, 1824.0}) {
        CHECK(curve(s - 1e-7) == doctest::Approx(curve(s)).epsilon(1e-4));
        CHECK(curve(s + 1e-7) == doctest::Approx(curve(s)).epsilon(1e-4));
    }
}

TEST_CASE("curve rejects bad anchor lists") {
    CHECK_THROWS_AS(ThroughputCurve({{100, 10}}), ConfigError);
    CHECK_THROWS_AS(ThroughputCurve({{100, 10}, {100, 20}}), ConfigError);
    CHECK_THROWS_AS(ThroughputCurve({{100, 10}, {200, 0}}), ConfigError);
}

TEST_CASE("offload timeline with degenerate costs is kernel time only") {
    GpuModel gpu;
    gpu.curve = ThroughputCurve({{1, 8}, {10000, 8}});
    const OffloadTimeline t = gpu_offload_timeline(gpu, 2048, 5.0);
    CHECK(t.tg1 == 5.0);
    CHECK(t.tg2 == 5.0);
    CHECK(t.tg3 == 5.0);
    CHECK(t.tg5 - t.tg1 == doctest::Approx(2048.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("launch phase contributes its configured latency") {
    const GpuModel gpu = desktop_like_gpu();
    const OffloadTimeline t = gpu_offload_timeline(gpu, 2048, 0.0);
    CHECK(t.tg3 - t.tg2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("offload phases are ordered for arbitrary chunks") {
    const GpuModel gpu = desktop_like_gpu();
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        const iter_t size = static_cast<iter_t>(rng() % 20000 + 1);
        const double start = static_cast<double>(rng() % 1000);
        const OffloadTimeline t = gpu_offload_timeline(gpu, size, start);
        CHECK(t.tg1 <= t.tg2);
        CHECK(t.tg2 <= t.tg3);
        CHECK(t.tg3 <= t.tg4);
        CHECK(t.tg4 <= t.tg5);
    }
}

TEST_CASE("effective throughput peaks at 640 on the desktop-like curve") {
    const GpuModel gpu = desktop_like_gpu();
    double best_lambda = 0;
    iter_t best_size = 0;
    for (iter_t size : {320, 640, 1280, 2560, 5120}) {
        const double lambda = gpu_effective_throughput(gpu, size);
        if (lambda > best_lambda) {
            best_lambda = lambda;
            best_size = size;
        }
    }
    CHECK(best_size == 640);
    CHECK(gpu_effective_throughput(gpu, 320) < gpu_effective_throughput(gpu, 640));
}

TEST_CASE("effective throughput never exceeds the kernel-only curve") {
    const GpuModel gpu = desktop_like_gpu();
    for (iter_t size = 64; size <= 16384; size += 173) {
        CHECK(gpu_effective_throughput(gpu, size) <=
              gpu.curve(static_cast<double>(size)) + 1e-12);
    }
}

TEST_CASE("hw metrics: oversized chunks stall, plateau chunks fill the EUs") {
    const GpuModel gpu = desktop_like_gpu();
    const GpuHwMetrics huge = gpu_hw_metrics(gpu, 20000);
    CHECK(huge.eu_stalled > 0.9);
    CHECK(huge.eu_active < 0.08);
    const GpuHwMetrics plateau = gpu_hw_metrics(gpu, 640);
    CHECK(plateau.eu_idle < 0.1);
    const GpuHwMetrics small = gpu_hw_metrics(gpu, 320);
    CHECK(small.eu_idle > plateau.eu_idle);
}

TEST_CASE("hw metric ratios partition the cycles") {
    const GpuModel gpu = desktop_like_gpu();
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        const iter_t size = static_cast<iter_t>(rng() % 30000 + 1);
        const GpuHwMetrics m = gpu_hw_metrics(gpu, size);
        CHECK(m.eu_active + m.eu_idle + m.eu_stalled == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(m.eu_active >= 0);
        CHECK(m.eu_idle >= 0);
        CHECK(m.eu_stalled >= 0);
    }
}

TEST_CASE("cpu chunk time divides by the core rate") {
    CpuCoreModel core;
    core.rate_iters_per_ms = 10.0;
    core.min_chunk_threshold = 8;
    CHECK(cpu_chunk_time(core, 100) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("big/little chunk times scale inversely with the rate ratio") {
    CpuCoreModel big, little;
    big.rate_iters_per_ms = 20.0;
    little.rate_iters_per_ms = 5.0;
    CHECK(cpu_chunk_time(little, 400) / cpu_chunk_time(big, 400) == doctest::Approx(4.0));
}

TEST_CASE("sub-threshold chunks pay the penalty factor") {
    CpuCoreModel core;
    core.rate_iters_per_ms = 10.0;
    core.min_chunk_threshold = 64;
    core.sub_threshold_penalty = 0.5;
    CHECK(cpu_chunk_time(core, 32) == doctest::Approx(2.0 * 3.2).epsilon(1e-12));
    CHECK(cpu_chunk_time(core, 64) == doctest::Approx(6.4).epsilon(1e-12));
}

TEST_CASE("device power selects active or idle draw") {
    CpuCoreModel little;
    little.power_active_w = 0.17;
    little.power_idle_w = 0.055;
    CHECK(device_power_w(little, false) == 0.055);
    CHECK(device_power_w(little, true) == 0.17);
    GpuModel gpu;
    gpu.power_active_w = 12;
    gpu.power_idle_w = 7;
    CHECK(device_power_w(gpu, true) == 12);
    CHECK(device_power_w(gpu, false) == 7);
}
