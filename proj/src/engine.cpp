#include "hetsched/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <queue>

#include "hetsched/errors.hpp"

namespace hetsched {

void validate(const ScenarioConfig& cfg) {
    if (cfg.space.begin > cfg.space.end) {
        throw ConfigError("iteration space has begin > end");
    }
    if (cfg.time_steps < 1) throw ConfigError("time_steps must be >= 1");
    if (cfg.gpu_chunk < 1) throw ConfigError("GPU chunk size must be >= 1");
    if (cfg.n_workers < 0) throw ConfigError("n_workers must be >= 0");
    if (cfg.n_big_cores < 0 || cfg.n_little_cores < 0) {
        throw ConfigError("core counts must be >= 0");
    }
    if (cfg.n_big_cores + cfg.n_little_cores < 1) {
        throw ConfigError("at least one CPU core is required to host threads");
    }
    if (cfg.dispatch.kind == DispatchKind::RoundRobinSlice && cfg.dispatch.quantum_ms <= 0) {
        throw ConfigError("round-robin quantum must be > 0");
    }
    if (cfg.dispatch.wakeup_slice_ms <= 0) throw ConfigError("wakeup slice must be > 0");
    if (cfg.dispatch.base_dispatch_latency_ms < 0 || cfg.dispatch.preemption_cost_ms < 0) {
        throw ConfigError("dispatch latencies must be >= 0");
    }
    if (cfg.sched_partition_cost_ms < 0) throw ConfigError("scheduling cost must be >= 0");
    if (cfg.gpu.curve.anchors().size() < 2) {
        throw ConfigError("GPU throughput curve is not configured");
    }
    if (cfg.gpu.num_eu < 1 || cfg.gpu.preferred_multiple < 1) {
        throw ConfigError("GPU occupancy parameters must be >= 1");
    }
    if (cfg.gpu.launch_latency_ms < 0 || cfg.gpu.h2d.alpha_ms < 0 || cfg.gpu.d2h.alpha_ms < 0 ||
        cfg.gpu.h2d.beta_ms_per_byte < 0 || cfg.gpu.d2h.beta_ms_per_byte < 0 ||
        cfg.gpu.bytes_per_iteration < 0) {
        throw ConfigError("GPU cost parameters must be >= 0");
    }
    for (const CpuCoreModel* m : {&cfg.big_core, &cfg.little_core}) {
        if (m->rate_iters_per_ms <= 0) throw ConfigError("CPU core rate must be > 0");
        if (m->sub_threshold_penalty <= 0) throw ConfigError("sub-threshold penalty must be > 0");
    }
    if (cfg.partitioner.min_cpu_chunk < 1) throw ConfigError("min_cpu_chunk must be >= 1");
    if (cfg.partitioner.bootstrap_fraction <= 0) {
        throw ConfigError("bootstrap fraction must be > 0");
    }
    if (cfg.power.sample_rate_hz <= 0) throw ConfigError("power sample rate must be > 0");
    if (cfg.power.sensor_refresh_ms <= 0) throw ConfigError("sensor refresh must be > 0");
    if (cfg.scheduler == SchedulerKind::BulkOracle) {
        if (cfg.gpu_percent < 0 || cfg.gpu_percent > 100) {
            throw ConfigError("bulk-oracle percent must be in [0, 100]");
        }
        if (cfg.n_workers == 0 && cfg.gpu_percent < 100 && !cfg.space.empty()) {
            throw ConfigError("bulk-oracle CPU share has no workers to run on");
        }
    }
    if (cfg.sampler.enabled && (cfg.sampler.utilization < 0 || cfg.sampler.utilization >= 1)) {
        throw ConfigError("sampler utilization must be in [0, 1)");
    }
    // Surface bad pins before any work.
    if (cfg.host.pin) {
        bool found = false;
        for (const DeviceId& c : core_inventory(cfg)) {
            if (c == *cfg.host.pin) found = true;
        }
        if (!found) throw ConfigError("host pinned to nonexistent core");
    }
}

std::vector<DeviceId> core_inventory(const ScenarioConfig& cfg) {
    std::vector<DeviceId> cores;
    for (int i = 0; i < cfg.n_big_cores; ++i) cores.push_back({DeviceClass::BigCore, i});
    for (int i = 0; i < cfg.n_little_cores; ++i) cores.push_back({DeviceClass::LittleCore, i});
    return cores;
}

const CpuCoreModel& core_model(const ScenarioConfig& cfg, DeviceClass cls) {
    return cls == DeviceClass::LittleCore ? cfg.little_core : cfg.big_core;
}

// ---------------------------------------------------------------------------
// SchedulerCore
// ---------------------------------------------------------------------------

SchedulerCore::SchedulerCore(const ScenarioConfig& cfg) : cfg_(cfg) {
    state_.gpu_chunk = cfg.gpu_chunk;
    state_.min_cpu_chunk = cfg.partitioner.min_cpu_chunk;
    state_.bootstrap_fraction = cfg.partitioner.bootstrap_fraction;
    state_.remaining = {0, 0};
}

void SchedulerCore::begin_step() {
    if (cfg_.scheduler == SchedulerKind::Dynamic) {
        state_.remaining = cfg_.space;
        return;
    }
    // Bulk-Oracle: a single block for the GPU, static per-worker blocks for
    // the rest, sized proportionally to each worker's nominal core rate.
    auto [gpu_part, cpu_part] = bulk_oracle_split(cfg_.space, cfg_.gpu_percent);
    bulk_gpu_ = gpu_part;
    bulk_worker_.assign(static_cast<std::size_t>(std::max(cfg_.n_workers, 0)), IterationSpace{});
    if (cfg_.n_workers > 0 && !cpu_part.empty()) {
        std::vector<double> rate(bulk_worker_.size());
        double total_rate = 0.0;
        for (int w = 0; w < cfg_.n_workers; ++w) {
            const DeviceClass cls =
                w < cfg_.n_big_cores ? DeviceClass::BigCore : DeviceClass::LittleCore;
            rate[w] = core_model(cfg_, cls).rate_iters_per_ms;
            total_rate += rate[w];
        }
        double cum = 0.0;
        iter_t prev = cpu_part.begin;
        for (int w = 0; w < cfg_.n_workers; ++w) {
            cum += rate[w];
            const iter_t edge =
                cpu_part.begin +
                static_cast<iter_t>(std::llround(cpu_part.size() * cum / total_rate));
            bulk_worker_[w] = {prev, edge};
            prev = edge;
        }
        bulk_worker_.back().end = cpu_part.end;  // absorb rounding in the last block
    }
    state_.remaining = cfg_.space;  // tracked for bookkeeping only
}

std::optional<Token> SchedulerCore::pull_dynamic_gpu() {
    if (state_.remaining.empty()) return std::nullopt;
    const iter_t take = next_gpu_chunk(state_);
    auto [front, rest] = split_front(state_.remaining, take);
    state_.remaining = rest;
    total_extracted_ += front.size();
    return Token{TokenKind::GToken, Chunk{front, DeviceId{DeviceClass::Gpu, 0}, gpu_interval_++}};
}

std::optional<Token> SchedulerCore::pull_dynamic_cpu(DeviceId core, int agent) {
    if (state_.remaining.empty()) return std::nullopt;
    const iter_t take = next_cpu_chunk(state_, agent);
    auto [front, rest] = split_front(state_.remaining, take);
    state_.remaining = rest;
    total_extracted_ += front.size();
    return Token{TokenKind::CToken, Chunk{front, core, cpu_interval_[agent]++}};
}

std::optional<Token> SchedulerCore::filter1(bool gpu_idle, DeviceId cpu_core, int agent) {
    if (cfg_.scheduler == SchedulerKind::Dynamic) {
        return gpu_idle ? pull_dynamic_gpu() : pull_dynamic_cpu(cpu_core, agent);
    }
    if (gpu_idle) {
        if (bulk_gpu_.empty()) return std::nullopt;
        const Chunk chunk{bulk_gpu_, DeviceId{DeviceClass::Gpu, 0}, gpu_interval_++};
        total_extracted_ += bulk_gpu_.size();
        bulk_gpu_ = {bulk_gpu_.end, bulk_gpu_.end};
        return Token{TokenKind::GToken, chunk};
    }
    if (agent < 0 || agent >= static_cast<int>(bulk_worker_.size()) ||
        bulk_worker_[agent].empty()) {
        return std::nullopt;
    }
    const Chunk chunk{bulk_worker_[agent], cpu_core, cpu_interval_[agent]++};
    total_extracted_ += bulk_worker_[agent].size();
    bulk_worker_[agent] = {bulk_worker_[agent].end, bulk_worker_[agent].end};
    return Token{TokenKind::CToken, chunk};
}

void SchedulerCore::record(const ThroughputSample& sample, int agent) {
    if (sample.device.is_gpu()) {
        state_.last_lambda_gpu = sample.lambda;
    } else {
        state_.last_lambda_cpu[agent] = sample.lambda;
    }
}

FilterOutcome filter2(const Token& token, const ScenarioConfig& cfg, double start_ms) {
    FilterOutcome out;
    const iter_t size = token.chunk.range.size();
    if (token.kind == TokenKind::GToken) {
        out.is_gpu = true;
        out.timeline = gpu_offload_timeline(cfg.gpu, size, start_ms);
        out.elapsed_ms = out.timeline.tg5 - out.timeline.tg1;
    } else {
        out.is_gpu = false;
        out.elapsed_ms = cpu_chunk_time(core_model(cfg, token.chunk.device.cls), size);
    }
    out.sample = make_sample(token.chunk.device, size, out.elapsed_ms);
    return out;
}

// ---------------------------------------------------------------------------
// Discrete-event simulator
// ---------------------------------------------------------------------------

namespace {

enum EvKind { kGpuComplete, kHostFilterDone, kWorkerDone, kRotate };

struct Ev {
    double t = 0;
    int cls = 0;  // tie-break: GPU(0) < big(1) < little(2)
    int dev = 0;
    std::uint64_t seq = 0;
    EvKind kind = kGpuComplete;
    int who = -1;  // thread index (WorkerDone) or core index (Rotate, HostFilterDone)
    std::uint64_t gen = 0;
};

struct EvAfter {
    bool operator()(const Ev& a, const Ev& b) const {
        if (a.t != b.t) return a.t > b.t;
        if (a.cls != b.cls) return a.cls > b.cls;
        if (a.dev != b.dev) return a.dev > b.dev;
        return a.seq > b.seq;
    }
};

enum class ThState { Ready, Running, Blocked, Done };

class Simulator {
public:
    explicit Simulator(const ScenarioConfig& cfg) : cfg_(cfg), sched_(cfg) {
        cores_inv_ = core_inventory(cfg);
        occ_.cores.reserve(cores_inv_.size());
        for (const DeviceId& c : cores_inv_) {
            occ_.cores.push_back({c, -1, 0.0});
        }
        anchored_.assign(cores_inv_.size(), false);
        busy_open_.assign(cores_inv_.size(), false);
        busy_from_.assign(cores_inv_.size(), 0.0);
        trace_.core_busy.resize(cores_inv_.size());

        std::vector<ThreadDescriptor> descs;
        descs.push_back({0, ThreadRole::HostThread, cfg.host.priority, cfg.host.pin});
        for (int w = 0; w < cfg.n_workers; ++w) {
            descs.push_back({w + 1, ThreadRole::Worker, ThreadPriority::Normal, std::nullopt});
        }
        const EligibilityPlan plan = assign_worker_cores(descs, cfg.dispatch, cores_inv_);
        for (std::size_t i = 0; i < descs.size(); ++i) {
            threads_.push_back(Th{descs[i], plan.eligible_by_thread[i]});
        }
        for (const std::string& w : plan.warnings) trace_.warnings.push_back(w);
        rotate_horizon_.assign(cores_inv_.size(), -1.0);
        sampler_core_ = -1;
        if (cfg.sampler.enabled && cfg.n_little_cores > 0) {
            sampler_core_ = cfg.n_big_cores + cfg.n_little_cores - 1;
        }
        slice_ms_ = rotation_slice_ms(cfg.dispatch);
    }

    RunTrace run() {
        trace_.space_size = cfg_.space.size();
        trace_.time_steps = cfg_.time_steps;
        for (int step = 0; step < cfg_.time_steps; ++step) {
            begin_step(step);
            drain();
            trace_.step_end_ms.push_back(now_);
        }
        trace_.total_time_ms = now_;
        finalize_busy();
        return std::move(trace_);
    }

private:
    struct Th {
        ThreadDescriptor desc;
        std::vector<int> eligible;
        ThState st = ThState::Done;
        int core = -1;
        std::uint64_t gen = 0;
        // Worker chunk in flight.
        bool has_chunk = false;
        Chunk chunk;
        double remaining_ms = 0;
        double done_at = 0;
        double chunk_start = 0;
        // Host bookkeeping.
        double tc1 = 0;
    };

    const ScenarioConfig& cfg_;
    SchedulerCore sched_;
    std::vector<DeviceId> cores_inv_;
    CoreOccupancy occ_;
    std::vector<bool> anchored_;
    std::vector<bool> busy_open_;
    std::vector<double> busy_from_;
    std::vector<double> rotate_horizon_;  // latest boundary with a scheduled rotation per core
    std::vector<Th> threads_;
    std::deque<int> ready_;
    std::priority_queue<Ev, std::vector<Ev>, EvAfter> pq_;
    std::uint64_t seq_ = 0;
    double now_ = 0;
    double slice_ms_ = 20.0;
    int step_ = 0;
    int live_ = 0;
    bool gpu_busy_ = false;
    int sampler_core_ = -1;

    GpuChunkRecord pending_{};
    bool pending_open_ = false;

    RunTrace trace_;

    static int class_rank(DeviceClass cls) {
        switch (cls) {
            case DeviceClass::Gpu: return 0;
            case DeviceClass::BigCore: return 1;
            case DeviceClass::LittleCore: return 2;
        }
        return 3;
    }

    void push(double t, DeviceClass cls, int dev, EvKind kind, int who, std::uint64_t gen) {
        pq_.push(Ev{t, class_rank(cls), dev, seq_++, kind, who, gen});
    }

    double base_latency() const { return cfg_.dispatch.base_dispatch_latency_ms; }

    // --- core occupancy / busy-interval bookkeeping ---

    void open_busy(int core, double t) {
        if (!busy_open_[core]) {
            busy_open_[core] = true;
            busy_from_[core] = t;
        }
    }

    void close_busy(int core, double t) {
        if (busy_open_[core]) {
            busy_open_[core] = false;
            if (t > busy_from_[core]) {
                trace_.core_busy[core].push_back({busy_from_[core], t});
            }
        }
    }

    // --- dispatch machinery ---

    // At most one pending rotation per (core, boundary); a request for a
    // boundary that is already covered is a no-op.
    void schedule_rotate(int core, double boundary) {
        if (boundary <= rotate_horizon_[core]) return;
        rotate_horizon_[core] = boundary;
        push(boundary, cores_inv_[core].cls, core, kRotate, core, 0);
    }

    void enqueue_ready(int tid, double t, bool front) {
        Th& th = threads_[tid];
        th.st = ThState::Ready;
        th.core = -1;
        if (front) {
            ready_.push_front(tid);
        } else {
            ready_.push_back(tid);
        }
        // Rotation opportunities on every busy core this thread could use.
        for (int c : th.eligible) {
            if (!occ_.idle(c)) {
                schedule_rotate(c, next_slice_boundary(occ_.cores[c], slice_ms_, t));
            }
        }
    }

    void pause_worker(int tid, double t, bool to_front) {
        Th& th = threads_[tid];
        assert(th.st == ThState::Running && th.has_chunk);
        th.remaining_ms = th.done_at - t;
        ++th.gen;
        occ_.cores[th.core].running_thread = -1;
        enqueue_ready(tid, t, to_front);
    }

    // Thread begins executing on `core` at time t (dispatch latency already added).
    void start_on_core(int tid, int core, double t) {
        Th& th = threads_[tid];
        th.st = ThState::Running;
        th.core = core;
        occ_.cores[core].running_thread = tid;
        if (!anchored_[core]) {
            anchored_[core] = true;
            occ_.cores[core].slice_anchor_ms = t;
        }
        open_busy(core, t);
        if (th.desc.role == ThreadRole::HostThread) {
            host_started(t);
        } else {
            worker_started(tid, t);
        }
    }

    void host_started(double t) {
        Th& host = threads_[0];
        host.tc1 = t;
        if (pending_open_) {
            pending_.tc3 = t;
            trace_.gpu_chunks.push_back(pending_);
            pending_open_ = false;
        }
        push(t + cfg_.sched_partition_cost_ms, cores_inv_[host.core].cls, host.core,
             kHostFilterDone, host.core, host.gen);
    }

    void worker_started(int tid, double t) {
        Th& th = threads_[tid];
        if (th.has_chunk) {  // resume after preemption
            th.done_at = t + th.remaining_ms;
            push(th.done_at, cores_inv_[th.core].cls, th.core, kWorkerDone, tid, th.gen);
            return;
        }
        pull_next_chunk(tid, t);
    }

    void pull_next_chunk(int tid, double t) {
        Th& th = threads_[tid];
        const int agent = tid - 1;
        const DeviceId core_id = cores_inv_[th.core];
        std::optional<Token> token = sched_.filter1(false, core_id, agent);
        if (!token) {
            thread_done(tid, t);
            return;
        }
        const FilterOutcome out = filter2(*token, cfg_, t);
        double elapsed = out.elapsed_ms;
        if (th.core == sampler_core_) {
            elapsed /= (1.0 - cfg_.sampler.utilization);
        }
        th.has_chunk = true;
        th.chunk = token->chunk;
        th.chunk_start = t;
        th.remaining_ms = elapsed;
        th.done_at = t + elapsed;
        push(th.done_at, core_id.cls, th.core, kWorkerDone, tid, th.gen);
    }

    void thread_done(int tid, double t) {
        Th& th = threads_[tid];
        const int core = th.core;
        th.st = ThState::Done;
        th.core = -1;
        --live_;
        if (core >= 0) {
            occ_.cores[core].running_thread = -1;
            release_core(core, t);
        }
    }

    // The core lost its thread; hand it to the first eligible ready thread.
    void release_core(int core, double t) {
        for (auto it = ready_.begin(); it != ready_.end(); ++it) {
            Th& th = threads_[*it];
            if (std::find(th.eligible.begin(), th.eligible.end(), core) != th.eligible.end()) {
                const int tid = *it;
                ready_.erase(it);
                start_on_core(tid, core, t + base_latency());
                return;
            }
        }
        close_busy(core, t);
    }

    // --- event handlers ---

    void on_host_filter_done(const Ev& ev) {
        Th& host = threads_[0];
        if (ev.gen != host.gen || host.st != ThState::Running) return;
        const double tc2 = now_;
        std::optional<Token> token = sched_.filter1(true, DeviceId{DeviceClass::Gpu, 0}, -1);
        const int core = host.core;
        if (!token) {
            thread_done(0, now_);
            return;
        }
        assert(!gpu_busy_);
        const FilterOutcome out = filter2(*token, cfg_, tc2);
        gpu_busy_ = true;
        pending_ = GpuChunkRecord{step_,
                                  token->chunk.interval_index,
                                  token->chunk.range.begin,
                                  token->chunk.range.end,
                                  host.tc1,
                                  tc2,
                                  0.0,
                                  out.timeline.tg1,
                                  out.timeline.tg2,
                                  out.timeline.tg3,
                                  out.timeline.tg4,
                                  out.timeline.tg5};
        pending_open_ = true;
        trace_.gpu_busy.push_back({out.timeline.tg1, out.timeline.tg5});
        if (out.timeline.tg2 > out.timeline.tg1) {
            trace_.memory_busy.push_back({out.timeline.tg1, out.timeline.tg2});
        }
        if (out.timeline.tg5 > out.timeline.tg4) {
            trace_.memory_busy.push_back({out.timeline.tg4, out.timeline.tg5});
        }
        push(out.timeline.tg5, DeviceClass::Gpu, 0, kGpuComplete, -1, 0);
        // The host blocks in the synchronous finish call; its core frees up.
        host.st = ThState::Blocked;
        host.core = -1;
        ++host.gen;
        occ_.cores[core].running_thread = -1;
        release_core(core, now_);
    }

    void on_gpu_complete(const Ev&) {
        gpu_busy_ = false;
        sched_.record(make_sample(DeviceId{DeviceClass::Gpu, 0},
                                  pending_.end - pending_.begin, pending_.tg5 - pending_.tg1),
                      -1);
        wake_host();
    }

    void wake_host() {
        Th& host = threads_[0];
        assert(host.st == ThState::Blocked);
        for (int c : host.eligible) {
            if (occ_.idle(c)) {
                start_on_core(0, c, now_ + base_latency());
                return;
            }
        }
        const bool boost = host.desc.priority == ThreadPriority::Boosted ||
                           cfg_.dispatch.kind == DispatchKind::WakeupPriorityBoost;
        if (boost) {
            const int victim_core = host.eligible.front();
            const int victim = occ_.cores[victim_core].running_thread;
            pause_worker(victim, now_, /*to_front=*/true);
            start_on_core(0, victim_core,
                          now_ + base_latency() + cfg_.dispatch.preemption_cost_ms);
            return;
        }
        // RoundRobinSlice at normal priority: queue up and wait for a boundary.
        enqueue_ready(0, now_, /*front=*/false);
    }

    void on_worker_done(const Ev& ev) {
        Th& th = threads_[ev.who];
        if (ev.gen != th.gen || th.st != ThState::Running) return;
        const Chunk& c = th.chunk;
        trace_.cpu_chunks.push_back(CpuChunkRecord{step_, c.device, c.interval_index,
                                                   c.range.begin, c.range.end, th.chunk_start,
                                                   now_});
        sched_.record(make_sample(c.device, c.range.size(), now_ - th.chunk_start), ev.who - 1);
        th.has_chunk = false;
        // CPU-bound workers do not yield between chunks; rotation happens only
        // at slice boundaries.
        pull_next_chunk(ev.who, now_);
    }

    void on_rotate(const Ev& ev) {
        const int core = ev.who;
        if (occ_.idle(core) || ready_.empty()) return;
        const int running = occ_.cores[core].running_thread;
        if (threads_[running].desc.role == ThreadRole::HostThread) return;
        auto it = std::find_if(ready_.begin(), ready_.end(), [&](int tid) {
            const auto& el = threads_[tid].eligible;
            return std::find(el.begin(), el.end(), core) != el.end();
        });
        if (it == ready_.end()) return;
        const int incoming = *it;
        ready_.erase(it);
        pause_worker(running, now_, /*to_front=*/false);
        start_on_core(incoming, core, now_ + base_latency());
        if (!ready_.empty()) {
            schedule_rotate(core, now_ + slice_ms_);
        }
    }

    // --- step driver ---

    void begin_step(int step) {
        step_ = step;
        pq_ = {};
        std::fill(rotate_horizon_.begin(), rotate_horizon_.end(), -1.0);
        ready_.clear();
        sched_.begin_step();
        live_ = static_cast<int>(threads_.size());
        for (Th& th : threads_) {
            th.st = ThState::Ready;
            th.core = -1;
            ++th.gen;
            assert(!th.has_chunk);
        }
        // Host first, then workers in id order.
        const double t0 = now_;
        for (int tid = 0; tid < static_cast<int>(threads_.size()); ++tid) {
            Th& th = threads_[tid];
            int free_core = -1;
            for (int c : th.eligible) {
                if (occ_.idle(c)) {
                    free_core = c;
                    break;
                }
            }
            if (free_core >= 0) {
                start_on_core(tid, free_core, t0 + base_latency());
            } else {
                enqueue_ready(tid, t0, /*front=*/false);
            }
        }
    }

    void drain() {
        while (live_ > 0 || gpu_busy_) {
            assert(!pq_.empty());
            const Ev ev = pq_.top();
            pq_.pop();
            assert(ev.t >= now_ - 1e-9);
            now_ = std::max(now_, ev.t);
            switch (ev.kind) {
                case kGpuComplete: on_gpu_complete(ev); break;
                case kHostFilterDone: on_host_filter_done(ev); break;
                case kWorkerDone: on_worker_done(ev); break;
                case kRotate: on_rotate(ev); break;
            }
        }
    }

    void finalize_busy() {
        for (auto& v : trace_.core_busy) {
            std::vector<BusyInterval> merged;
            for (const BusyInterval& b : v) {
                if (!merged.empty() && b.start_ms <= merged.back().end_ms + 1e-12) {
                    merged.back().end_ms = std::max(merged.back().end_ms, b.end_ms);
                } else {
                    merged.push_back(b);
                }
            }
            v = std::move(merged);
        }
    }
};

}  // namespace

RunTrace run(const ScenarioConfig& cfg) {
    validate(cfg);
    Simulator sim(cfg);
    return sim.run();
}

}  // namespace hetsched
