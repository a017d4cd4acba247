#include <chrono>
#include <mutex>
#include <thread>

#include "hetsched/engine.hpp"
#include "hetsched/errors.hpp"

namespace hetsched {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point anchor) {
    return std::chrono::duration<double, std::milli>(Clock::now() - anchor).count();
}

void wait_until_ms(Clock::time_point anchor, double target_ms, bool spin) {
    const auto deadline =
        anchor + std::chrono::duration_cast<Clock::duration>(
                     std::chrono::duration<double, std::milli>(target_ms));
    if (spin) {
        while (Clock::now() < deadline) {
        }
    } else {
        std::this_thread::sleep_until(deadline);
    }
}

}  // namespace

RunTrace run_real_threads(const ScenarioConfig& cfg, const RealThreadOptions& opts) {
    validate(cfg);
    SchedulerCore sched(cfg);
    std::mutex dispatcher;

    RunTrace trace;
    trace.space_size = cfg.space.size();
    trace.time_steps = cfg.time_steps;
    trace.core_busy.resize(core_inventory(cfg).size());

    const Clock::time_point anchor = Clock::now();
    double gpu_free_ms = 0.0;  // virtual device timeline; host thread only

    auto host_body = [&](int step) {
        while (true) {
            const double tc1 = ms_since(anchor);
            std::optional<Token> token;
            {
                std::lock_guard<std::mutex> lock(dispatcher);
                token = sched.filter1(true, DeviceId{DeviceClass::Gpu, 0}, -1);
            }
            if (!token) return;
            const double tc2 = ms_since(anchor);
            // The stub device executes the enqueued phases on its own timeline.
            const double tg1 = std::max(tc2, gpu_free_ms);
            const OffloadTimeline tl =
                gpu_offload_timeline(cfg.gpu, token->chunk.range.size(), tg1);
            gpu_free_ms = tl.tg5;
            wait_until_ms(anchor, tl.tg5 + opts.wakeup_latency_ms, /*spin=*/false);
            const double tc3 = ms_since(anchor);
            {
                std::lock_guard<std::mutex> lock(dispatcher);
                sched.record(
                    make_sample(token->chunk.device, token->chunk.range.size(), tl.tg5 - tl.tg1),
                    -1);
                trace.gpu_chunks.push_back(GpuChunkRecord{
                    step, token->chunk.interval_index, token->chunk.range.begin,
                    token->chunk.range.end, tc1, tc2, tc3, tl.tg1, tl.tg2, tl.tg3, tl.tg4,
                    tl.tg5});
                trace.gpu_busy.push_back({tl.tg1, tl.tg5});
                if (tl.tg2 > tl.tg1) trace.memory_busy.push_back({tl.tg1, tl.tg2});
                if (tl.tg5 > tl.tg4) trace.memory_busy.push_back({tl.tg4, tl.tg5});
            }
        }
    };

    auto worker_body = [&](int step, int rank) {
        const DeviceClass cls =
            rank < cfg.n_big_cores ? DeviceClass::BigCore : DeviceClass::LittleCore;
        const int index = cls == DeviceClass::BigCore
                              ? rank % std::max(cfg.n_big_cores, 1)
                              : (rank - cfg.n_big_cores) % std::max(cfg.n_little_cores, 1);
        const DeviceId core{cls, index};
        const CpuCoreModel& model = core_model(cfg, cls);
        while (true) {
            std::optional<Token> token;
            {
                std::lock_guard<std::mutex> lock(dispatcher);
                token = sched.filter1(false, core, rank);
            }
            if (!token) return;
            const double start = ms_since(anchor);
            // Synthetic kernel: pace the chunk by the modeled core rate.
            wait_until_ms(anchor, start + cpu_chunk_time(model, token->chunk.range.size()),
                          opts.spin_workers);
            const double end = ms_since(anchor);
            {
                std::lock_guard<std::mutex> lock(dispatcher);
                sched.record(make_sample(token->chunk.device, token->chunk.range.size(),
                                         end - start),
                             rank);
                trace.cpu_chunks.push_back(CpuChunkRecord{step, token->chunk.device,
                                                          token->chunk.interval_index,
                                                          token->chunk.range.begin,
                                                          token->chunk.range.end, start, end});
            }
        }
    };

    for (int step = 0; step < cfg.time_steps; ++step) {
        {
            std::lock_guard<std::mutex> lock(dispatcher);
            sched.begin_step();
        }
        std::vector<std::thread> pool;
        try {
            pool.emplace_back(host_body, step);
            for (int w = 0; w < cfg.n_workers; ++w) {
                pool.emplace_back(worker_body, step, w);
            }
        } catch (const std::system_error& e) {
            for (std::thread& t : pool) {
                if (t.joinable()) t.join();
            }
            throw RunAborted(std::string("thread spawn failed: ") + e.what());
        }
        for (std::thread& t : pool) t.join();
        trace.step_end_ms.push_back(ms_since(anchor));
    }
    trace.total_time_ms = ms_since(anchor);

    // Approximate per-core busy intervals from the chunk records.
    const std::vector<DeviceId> cores = core_inventory(cfg);
    for (const CpuChunkRecord& rec : trace.cpu_chunks) {
        for (std::size_t i = 0; i < cores.size(); ++i) {
            if (cores[i] == rec.device) {
                trace.core_busy[i].push_back({rec.start_ms, rec.end_ms});
                break;
            }
        }
    }
    return trace;
}

}  // namespace hetsched
