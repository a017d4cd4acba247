#include "hetsched/os_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "hetsched/errors.hpp"

namespace hetsched {

double rotation_slice_ms(const DispatchPolicy& policy) {
    return policy.kind == DispatchKind::RoundRobinSlice ? policy.quantum_ms
                                                        : policy.wakeup_slice_ms;
}

double next_slice_boundary(const CoreOccupancy::Slot& slot, double slice_ms, double now) {
    if (now <= slot.slice_anchor_ms) {
        return slot.slice_anchor_ms;
    }
    const double k = std::ceil((now - slot.slice_anchor_ms) / slice_ms);
    return slot.slice_anchor_ms + k * slice_ms;
}

namespace {

std::vector<int> class_first_order(const CoreOccupancy& occ, DeviceClass preferred) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(occ.cores.size()); ++i) {
        if (occ.cores[i].core.cls == preferred) out.push_back(i);
    }
    for (int i = 0; i < static_cast<int>(occ.cores.size()); ++i) {
        if (occ.cores[i].core.cls != preferred) out.push_back(i);
    }
    return out;
}

}  // namespace

std::vector<int> eligible_cores(const CoreOccupancy& occ, const ThreadDescriptor& thread) {
    if (thread.pin) {
        for (int i = 0; i < static_cast<int>(occ.cores.size()); ++i) {
            if (occ.cores[i].core == *thread.pin) return {i};
        }
        throw ConfigError("thread " + std::to_string(thread.id) + " pinned to nonexistent core " +
                          device_class_name(thread.pin->cls) + "/" +
                          std::to_string(thread.pin->index));
    }
    return class_first_order(occ, DeviceClass::BigCore);
}

double host_wakeup_delay(const DispatchPolicy& policy, const CoreOccupancy& occ,
                         const ThreadDescriptor& host, double now) {
    const std::vector<int> eligible = eligible_cores(occ, host);
    for (int c : eligible) {
        if (occ.idle(c)) {
            return policy.base_dispatch_latency_ms;
        }
    }
    if (host.priority == ThreadPriority::Boosted || policy.kind == DispatchKind::WakeupPriorityBoost) {
        return policy.base_dispatch_latency_ms + policy.preemption_cost_ms;
    }
    // RoundRobinSlice, normal priority, every eligible core busy: wait for the
    // earliest slice boundary among them.
    double earliest = std::numeric_limits<double>::infinity();
    for (int c : eligible) {
        earliest = std::min(earliest, next_slice_boundary(occ.cores[c], policy.quantum_ms, now));
    }
    return (earliest - now) + policy.base_dispatch_latency_ms;
}

EligibilityPlan assign_worker_cores(const std::vector<ThreadDescriptor>& threads,
                                    const DispatchPolicy& policy,
                                    const std::vector<DeviceId>& cores) {
    (void)policy;
    std::vector<int> big, little, all;
    for (int i = 0; i < static_cast<int>(cores.size()); ++i) {
        all.push_back(i);
        (cores[i].cls == DeviceClass::BigCore ? big : little).push_back(i);
    }
    // Big cores first in the wrap order too.
    std::vector<int> big_first = big;
    big_first.insert(big_first.end(), little.begin(), little.end());

    EligibilityPlan plan;
    plan.eligible_by_thread.resize(threads.size());
    std::map<std::pair<int, int>, int> pin_counts;
    int worker_rank = 0;
    for (std::size_t i = 0; i < threads.size(); ++i) {
        const ThreadDescriptor& t = threads[i];
        if (t.pin) {
            bool found = false;
            for (int c = 0; c < static_cast<int>(cores.size()); ++c) {
                if (cores[c] == *t.pin) {
                    plan.eligible_by_thread[i] = {c};
                    found = true;
                    const int n = ++pin_counts[{static_cast<int>(t.pin->cls), t.pin->index}];
                    if (n > 1) {
                        plan.warnings.push_back("core " +
                                                std::string(device_class_name(t.pin->cls)) + "/" +
                                                std::to_string(t.pin->index) +
                                                " time-shares " + std::to_string(n) +
                                                " pinned threads");
                    }
                    break;
                }
            }
            if (!found) {
                throw ConfigError("thread " + std::to_string(t.id) +
                                  " pinned to nonexistent core");
            }
            continue;
        }
        if (t.role == ThreadRole::Worker) {
            if (worker_rank < static_cast<int>(big.size())) {
                plan.eligible_by_thread[i] = big;
            } else if (worker_rank < static_cast<int>(big.size() + little.size())) {
                plan.eligible_by_thread[i] = little;
            } else {
                plan.eligible_by_thread[i] = big_first;
                plan.warnings.push_back("worker " + std::to_string(t.id) +
                                        " oversubscribes all cores");
            }
            ++worker_rank;
        } else {
            plan.eligible_by_thread[i] = big_first;
        }
    }
    return plan;
}

}  // namespace hetsched
