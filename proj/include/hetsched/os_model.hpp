#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hetsched/core.hpp"

namespace hetsched {

enum class DispatchKind {
    RoundRobinSlice,       // a woken thread waits for the next slice boundary
    WakeupPriorityBoost,   // a woken thread preempts a running CPU-bound thread
};

struct DispatchPolicy {
    DispatchKind kind = DispatchKind::WakeupPriorityBoost;
    double quantum_ms = 20.0;              // slice length under RoundRobinSlice
    double base_dispatch_latency_ms = 0.05;
    double preemption_cost_ms = 0.01;      // extra latency when a worker is preempted
    // Rotation granularity under WakeupPriorityBoost. Not part of the wakeup
    // behavior; only keeps oversubscribed CPU-bound workers time-shared.
    double wakeup_slice_ms = 10.0;
};

/// Slice length used for time-sharing runnable threads on one core.
double rotation_slice_ms(const DispatchPolicy& policy);

enum class ThreadRole { HostThread, Worker, EnergySampler };
enum class ThreadPriority { Normal, Boosted };

struct ThreadDescriptor {
    int id = 0;
    ThreadRole role = ThreadRole::Worker;
    ThreadPriority priority = ThreadPriority::Normal;
    std::optional<DeviceId> pin;
};

/// Snapshot of which thread occupies each core plus the ready queue.
/// slice_anchor_ms fixes the phase of the core's slice grid: rotation
/// opportunities occur at slice_anchor_ms + k * slice.
struct CoreOccupancy {
    struct Slot {
        DeviceId core;
        int running_thread = -1;  // -1 = idle
        double slice_anchor_ms = 0.0;
    };
    std::vector<Slot> cores;
    std::vector<int> ready;

    bool idle(std::size_t core_index) const { return cores[core_index].running_thread < 0; }
};

/// First slice boundary of `slot` at or after `now`.
double next_slice_boundary(const CoreOccupancy::Slot& slot, double slice_ms, double now);

/// Core indices the thread may run on, in preference order (pin wins; big
/// cores before little ones otherwise). Throws ConfigError for a pin that
/// refers to a core not present in `occ`.
std::vector<int> eligible_cores(const CoreOccupancy& occ, const ThreadDescriptor& thread);

/// Milliseconds between the device completion signal and the host thread
/// resuming execution. An idle eligible core costs only the base dispatch
/// latency; a boosted host (or a wakeup-boosting OS) preempts a worker; a
/// normal-priority host under RoundRobinSlice waits for the earliest slice
/// boundary among its eligible cores.
double host_wakeup_delay(const DispatchPolicy& policy, const CoreOccupancy& occ,
                         const ThreadDescriptor& host, double now);

struct EligibilityPlan {
    // Indexed like the input thread list; each entry lists core indices.
    std::vector<std::vector<int>> eligible_by_thread;
    std::vector<std::string> warnings;
};

/// Static worker-to-core-class placement: workers fill big cores first,
/// little cores next, and wrap over everything once both classes are full.
/// Pinned threads keep their pins; conflicting pins are legal (time-shared)
/// and flagged with a warning.
EligibilityPlan assign_worker_cores(const std::vector<ThreadDescriptor>& threads,
                                    const DispatchPolicy& policy,
                                    const std::vector<DeviceId>& cores);

}  // namespace hetsched
