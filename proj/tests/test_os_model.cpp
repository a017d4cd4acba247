#include <random>

#include "doctest.h"

#include "hetsched/errors.hpp"
#include "hetsched/os_model.hpp"

using namespace hetsched;

namespace {

CoreOccupancy four_big_cores() {
    CoreOccupancy occ;
    for (int i = 0; i < 4; ++i) {
        occ.cores.push_back({DeviceId{DeviceClass::BigCore, i}, -1, 0.0});
    }
    return occ;
}

ThreadDescriptor host_thread(ThreadPriority prio = ThreadPriority::Normal) {
    return ThreadDescriptor{0, ThreadRole::HostThread, prio, std::nullopt};
}

}  // namespace

TEST_CASE("an idle eligible core costs only the base dispatch latency") {
    CoreOccupancy occ = four_big_cores();
    occ.cores[0].running_thread = 1;
    occ.cores[1].running_thread = 2;
    occ.cores[2].running_thread = 3;  // core 3 idle
    DispatchPolicy rr{DispatchKind::RoundRobinSlice, 20.0, 0.05, 0.01};
    DispatchPolicy wakeup{DispatchKind::WakeupPriorityBoost, 20.0, 0.05, 0.01};
    CHECK(host_wakeup_delay(rr, occ, host_thread(), 37.0) == doctest::Approx(0.05));
    CHECK(host_wakeup_delay(wakeup, occ, host_thread(), 37.0) == doctest::Approx(0.05));
}

TEST_CASE("round robin waits for the earliest slice boundary when all cores are busy") {
    CoreOccupancy occ = four_big_cores();
    for (int i = 0; i < 4; ++i) occ.cores[i].running_thread = i + 1;
    occ.cores[0].slice_anchor_ms = 0.0;
    occ.cores[1].slice_anchor_ms = 3.0;
    occ.cores[2].slice_anchor_ms = 6.0;
    occ.cores[3].slice_anchor_ms = 9.0;
    DispatchPolicy rr{DispatchKind::RoundRobinSlice, 20.0, 0.05, 0.01};
    // boundaries after t=32: 40 (core 0), 43, 46, 29+20=49 -> earliest 40
    const double d = host_wakeup_delay(rr, occ, host_thread(), 32.0);
    CHECK(d == doctest::Approx(8.0 + 0.05));
}

TEST_CASE("boost dispatches immediately by preempting a worker") {
    CoreOccupancy occ = four_big_cores();
    for (int i = 0; i < 4; ++i) occ.cores[i].running_thread = i + 1;
    DispatchPolicy rr{DispatchKind::RoundRobinSlice, 20.0, 0.05, 0.01};
    DispatchPolicy wakeup{DispatchKind::WakeupPriorityBoost, 20.0, 0.05, 0.01};
    CHECK(host_wakeup_delay(rr, occ, host_thread(ThreadPriority::Boosted), 55.0) ==
          doctest::Approx(0.06));
    CHECK(host_wakeup_delay(wakeup, occ, host_thread(), 55.0) == doctest::Approx(0.06));
}

TEST_CASE("under the wakeup-boost policy the boost flag does not change the delay") {
    CoreOccupancy occ = four_big_cores();
    for (int i = 0; i < 4; ++i) occ.cores[i].running_thread = i + 1;
    DispatchPolicy wakeup{DispatchKind::WakeupPriorityBoost, 20.0, 0.05, 0.01};
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const double t = static_cast<double>(rng() % 10000) / 7.0;
        CHECK(host_wakeup_delay(wakeup, occ, host_thread(ThreadPriority::Normal), t) ==
              host_wakeup_delay(wakeup, occ, host_thread(ThreadPriority::Boosted), t));
    }
}

TEST_CASE("round-robin delay is bounded by one quantum plus the base latency") {
    DispatchPolicy rr{DispatchKind::RoundRobinSlice, 20.0, 0.05, 0.01};
    std::mt19937_64 rng(8);
    for (int i = 0; i < 500; ++i) {
        CoreOccupancy occ = four_big_cores();
        for (int c = 0; c < 4; ++c) {
            occ.cores[c].running_thread = c + 1;
            occ.cores[c].slice_anchor_ms = static_cast<double>(rng() % 200) / 10.0;
        }
        const double t = static_cast<double>(rng() % 100000) / 13.0;
        const double d = host_wakeup_delay(rr, occ, host_thread(), t);
        CHECK(d >= rr.base_dispatch_latency_ms);
        CHECK(d <= rr.quantum_ms + rr.base_dispatch_latency_ms + 1e-9);
    }
}

TEST_CASE("a pin to a nonexistent core is a configuration error") {
    CoreOccupancy occ = four_big_cores();
    ThreadDescriptor host{0, ThreadRole::HostThread, ThreadPriority::Normal,
                          DeviceId{DeviceClass::LittleCore, 0}};
    DispatchPolicy rr{DispatchKind::RoundRobinSlice, 20.0, 0.05, 0.01};
    CHECK_THROWS_AS(host_wakeup_delay(rr, occ, host, 0.0), ConfigError);
}

TEST_CASE("pinned host only considers its own core") {
    CoreOccupancy occ = four_big_cores();
    occ.cores[0].running_thread = 7;  // pinned core busy, others idle
    ThreadDescriptor host{0, ThreadRole::HostThread, ThreadPriority::Normal,
                          DeviceId{DeviceClass::BigCore, 0}};
    DispatchPolicy wakeup{DispatchKind::WakeupPriorityBoost, 20.0, 0.02, 0.01};
    CHECK(host_wakeup_delay(wakeup, occ, host, 10.0) == doctest::Approx(0.03));
}

TEST_CASE("worker placement fills big cores, then little, then wraps") {
    std::vector<DeviceId> cores;
    for (int i = 0; i < 4; ++i) cores.push_back({DeviceClass::BigCore, i});
    for (int i = 0; i < 4; ++i) cores.push_back({DeviceClass::LittleCore, i});
    DispatchPolicy policy;

    std::vector<ThreadDescriptor> threads;
    threads.push_back(host_thread());
    for (int w = 0; w < 8; ++w) {
        threads.push_back({w + 1, ThreadRole::Worker, ThreadPriority::Normal, std::nullopt});
    }
    const EligibilityPlan plan = assign_worker_cores(threads, policy, cores);
    // workers 0..3 on big cores, 4..7 on little cores
    for (int w = 0; w < 4; ++w) {
        CHECK(plan.eligible_by_thread[w + 1] == std::vector<int>{0, 1, 2, 3});
    }
    for (int w = 4; w < 8; ++w) {
        CHECK(plan.eligible_by_thread[w + 1] == std::vector<int>{4, 5, 6, 7});
    }
    CHECK(plan.warnings.empty());
}

TEST_CASE("3+1 on four big cores leaves no oversubscription") {
    std::vector<DeviceId> cores;
    for (int i = 0; i < 4; ++i) cores.push_back({DeviceClass::BigCore, i});
    std::vector<ThreadDescriptor> threads;
    threads.push_back(host_thread());
    for (int w = 0; w < 3; ++w) {
        threads.push_back({w + 1, ThreadRole::Worker, ThreadPriority::Normal, std::nullopt});
    }
    const EligibilityPlan plan = assign_worker_cores(threads, DispatchPolicy{}, cores);
    CHECK(plan.warnings.empty());
    CHECK(plan.eligible_by_thread.size() == 4);
}

TEST_CASE("workers beyond both classes wrap over all cores with a warning") {
    std::vector<DeviceId> cores;
    for (int i = 0; i < 2; ++i) cores.push_back({DeviceClass::BigCore, i});
    std::vector<ThreadDescriptor> threads;
    threads.push_back(host_thread());
    for (int w = 0; w < 3; ++w) {
        threads.push_back({w + 1, ThreadRole::Worker, ThreadPriority::Normal, std::nullopt});
    }
    const EligibilityPlan plan = assign_worker_cores(threads, DispatchPolicy{}, cores);
    CHECK(plan.eligible_by_thread[3] == std::vector<int>{0, 1});
    CHECK(!plan.warnings.empty());
}

TEST_CASE("conflicting pins time-share and get flagged") {
    std::vector<DeviceId> cores{{DeviceClass::BigCore, 0}, {DeviceClass::BigCore, 1}};
    std::vector<ThreadDescriptor> threads;
    threads.push_back({0, ThreadRole::HostThread, ThreadPriority::Normal,
                       DeviceId{DeviceClass::BigCore, 0}});
    threads.push_back({1, ThreadRole::Worker, ThreadPriority::Normal,
                       DeviceId{DeviceClass::BigCore, 0}});
    const EligibilityPlan plan = assign_worker_cores(threads, DispatchPolicy{}, cores);
    CHECK(plan.eligible_by_thread[0] == std::vector<int>{0});
    CHECK(plan.eligible_by_thread[1] == std::vector<int>{0});
    CHECK(!plan.warnings.empty());
}
