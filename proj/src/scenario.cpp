#include "hetsched/scenario.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "hetsched/errors.hpp"

namespace hetsched {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("scenario: " + msg); }

const json& need(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) fail(std::string("missing key '") + key + "'");
    return *it;
}

void check_keys(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.key().rfind("_", 0) == 0) continue;  // notes and annotations
        if (!allowed.count(it.key())) {
            fail("unknown key '" + it.key() + "' in " + where);
        }
    }
}

DeviceClass class_from_string(const std::string& s) {
    if (s == "gpu") return DeviceClass::Gpu;
    if (s == "big") return DeviceClass::BigCore;
    if (s == "little") return DeviceClass::LittleCore;
    fail("unknown device class '" + s + "'");
}

AffineCostMs cost_from_json(const json& doc, const std::string& where) {
    check_keys(doc, {"alpha_ms", "beta_ms_per_byte"}, where);
    AffineCostMs c;
    c.alpha_ms = doc.value("alpha_ms", 0.0);
    c.beta_ms_per_byte = doc.value("beta_ms_per_byte", 0.0);
    return c;
}

json cost_to_json(const AffineCostMs& c) {
    return json{{"alpha_ms", c.alpha_ms}, {"beta_ms_per_byte", c.beta_ms_per_byte}};
}

CpuCoreModel cpu_from_json(const json& doc, DeviceClass cls, const std::string& where) {
    check_keys(doc,
               {"count", "rate_iters_per_ms", "min_chunk_threshold", "sub_threshold_penalty",
                "power_active_w", "power_idle_w"},
               where);
    CpuCoreModel m;
    m.cls = cls;
    m.rate_iters_per_ms = doc.value("rate_iters_per_ms", 1.0);
    m.min_chunk_threshold = doc.value("min_chunk_threshold", iter_t{1});
    m.sub_threshold_penalty = doc.value("sub_threshold_penalty", 0.5);
    m.power_active_w = doc.value("power_active_w", 0.0);
    m.power_idle_w = doc.value("power_idle_w", 0.0);
    return m;
}

json cpu_to_json(const CpuCoreModel& m, int count) {
    return json{{"count", count},
                {"rate_iters_per_ms", m.rate_iters_per_ms},
                {"min_chunk_threshold", m.min_chunk_threshold},
                {"sub_threshold_penalty", m.sub_threshold_penalty},
                {"power_active_w", m.power_active_w},
                {"power_idle_w", m.power_idle_w}};
}

}  // namespace

std::filesystem::path default_preset_dir() {
    if (const char* env = std::getenv("HETSCHED_PRESET_DIR")) {
        return std::filesystem::path(env);
    }
    return std::filesystem::path("presets");
}

ScenarioConfig scenario_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& preset_dir) {
    if (!doc.is_object()) fail("document must be an object");
    if (doc.contains("preset")) {
        const std::filesystem::path dir =
            preset_dir.empty() ? default_preset_dir() : preset_dir;
        const std::string preset = doc.at("preset").get<std::string>();
        const std::filesystem::path file = dir / (preset + ".json");
        std::ifstream in(file);
        if (!in) fail("preset '" + preset + "' not found at " + file.string());
        json base = json::parse(in, nullptr, true, true);
        json overrides = doc;
        overrides.erase("preset");
        base.merge_patch(overrides);
        return scenario_from_json(base, dir);
    }

    check_keys(doc,
               {"name", "space", "time_steps", "seed", "scheduler", "n_workers", "dispatch",
                "host", "gpu", "big_cores", "little_cores", "partitioner", "power", "sampler",
                "sched_partition_cost_ms"},
               "scenario");
    ScenarioConfig cfg;
    cfg.name = doc.value("name", std::string("scenario"));
    const json& space = need(doc, "space");
    if (!space.is_array() || space.size() != 2) fail("'space' must be [begin, end]");
    cfg.space = {space[0].get<iter_t>(), space[1].get<iter_t>()};
    cfg.time_steps = doc.value("time_steps", 1);
    cfg.seed = doc.value("seed", std::uint64_t{0});
    cfg.n_workers = doc.value("n_workers", 0);
    cfg.sched_partition_cost_ms = doc.value("sched_partition_cost_ms", 0.005);

    const json& sch = need(doc, "scheduler");
    check_keys(sch, {"kind", "gpu_chunk", "gpu_percent"}, "scheduler");
    const std::string kind = sch.value("kind", std::string("dynamic"));
    if (kind == "dynamic") {
        cfg.scheduler = SchedulerKind::Dynamic;
    } else if (kind == "bulk_oracle") {
        cfg.scheduler = SchedulerKind::BulkOracle;
    } else {
        fail("unknown scheduler kind '" + kind + "'");
    }
    cfg.gpu_chunk = sch.value("gpu_chunk", iter_t{1});
    cfg.gpu_percent = sch.value("gpu_percent", 0);

    if (doc.contains("dispatch")) {
        const json& d = doc.at("dispatch");
        check_keys(d,
                   {"kind", "quantum_ms", "base_dispatch_latency_ms", "preemption_cost_ms",
                    "wakeup_slice_ms"},
                   "dispatch");
        const std::string dk = d.value("kind", std::string("wakeup_priority_boost"));
        if (dk == "round_robin_slice" || dk == "rr") {
            cfg.dispatch.kind = DispatchKind::RoundRobinSlice;
        } else if (dk == "wakeup_priority_boost" || dk == "wakeup") {
            cfg.dispatch.kind = DispatchKind::WakeupPriorityBoost;
        } else {
            fail("unknown dispatch kind '" + dk + "'");
        }
        cfg.dispatch.quantum_ms = d.value("quantum_ms", 20.0);
        cfg.dispatch.base_dispatch_latency_ms = d.value("base_dispatch_latency_ms", 0.05);
        cfg.dispatch.preemption_cost_ms = d.value("preemption_cost_ms", 0.01);
        cfg.dispatch.wakeup_slice_ms = d.value("wakeup_slice_ms", 10.0);
    }

    if (doc.contains("host")) {
        const json& h = doc.at("host");
        check_keys(h, {"priority", "pin"}, "host");
        const std::string pr = h.value("priority", std::string("normal"));
        if (pr == "normal") {
            cfg.host.priority = ThreadPriority::Normal;
        } else if (pr == "boosted") {
            cfg.host.priority = ThreadPriority::Boosted;
        } else {
            fail("unknown host priority '" + pr + "'");
        }
        if (h.contains("pin") && !h.at("pin").is_null()) {
            const json& p = h.at("pin");
            check_keys(p, {"class", "index"}, "host.pin");
            cfg.host.pin = DeviceId{class_from_string(p.at("class").get<std::string>()),
                                    p.value("index", 0)};
        }
    }

    const json& g = need(doc, "gpu");
    check_keys(g,
               {"num_eu", "preferred_multiple", "launch_latency_ms", "h2d", "d2h",
                "bytes_per_iteration", "curve", "power_active_w", "power_idle_w", "fill_factor",
                "idle_cap"},
               "gpu");
    cfg.gpu.num_eu = g.value("num_eu", 1);
    cfg.gpu.preferred_multiple = g.value("preferred_multiple", 1);
    cfg.gpu.launch_latency_ms = g.value("launch_latency_ms", 0.0);
    if (g.contains("h2d")) cfg.gpu.h2d = cost_from_json(g.at("h2d"), "gpu.h2d");
    if (g.contains("d2h")) cfg.gpu.d2h = cost_from_json(g.at("d2h"), "gpu.d2h");
    cfg.gpu.bytes_per_iteration = g.value("bytes_per_iteration", 0.0);
    cfg.gpu.power_active_w = g.value("power_active_w", 0.0);
    cfg.gpu.power_idle_w = g.value("power_idle_w", 0.0);
    cfg.gpu.fill_factor = g.value("fill_factor", 2.0);
    cfg.gpu.idle_cap = g.value("idle_cap", 0.85);
    const json& curve = need(g, "curve");
    if (!curve.is_array()) fail("gpu.curve must be an array of [size, rate] anchors");
    std::vector<std::pair<double, double>> anchors;
    for (const json& a : curve) {
        if (!a.is_array() || a.size() != 2) fail("gpu.curve anchors must be [size, rate]");
        anchors.emplace_back(a[0].get<double>(), a[1].get<double>());
    }
    cfg.gpu.curve = ThroughputCurve(std::move(anchors));

    if (doc.contains("big_cores")) {
        cfg.n_big_cores = doc.at("big_cores").value("count", 0);
        cfg.big_core = cpu_from_json(doc.at("big_cores"), DeviceClass::BigCore, "big_cores");
    }
    if (doc.contains("little_cores")) {
        cfg.n_little_cores = doc.at("little_cores").value("count", 0);
        cfg.little_core =
            cpu_from_json(doc.at("little_cores"), DeviceClass::LittleCore, "little_cores");
    }

    if (doc.contains("partitioner")) {
        const json& p = doc.at("partitioner");
        check_keys(p, {"min_cpu_chunk", "bootstrap_fraction", "train_epsilon", "train_patience"},
                   "partitioner");
        cfg.partitioner.min_cpu_chunk = p.value("min_cpu_chunk", iter_t{64});
        cfg.partitioner.bootstrap_fraction = p.value("bootstrap_fraction", 0.25);
        cfg.partitioner.train_epsilon = p.value("train_epsilon", 0.02);
        cfg.partitioner.train_patience = p.value("train_patience", 2);
    }

    if (doc.contains("power")) {
        const json& p = doc.at("power");
        check_keys(p,
                   {"sample_rate_hz", "sensor_refresh_ms", "memory_baseline_w",
                    "memory_transfer_w"},
                   "power");
        cfg.power.sample_rate_hz = p.value("sample_rate_hz", 10.0);
        cfg.power.sensor_refresh_ms = p.value("sensor_refresh_ms", 260.0);
        cfg.power.memory_baseline_w = p.value("memory_baseline_w", 0.0);
        cfg.power.memory_transfer_w = p.value("memory_transfer_w", 0.0);
    }

    if (doc.contains("sampler")) {
        const json& s = doc.at("sampler");
        check_keys(s, {"enabled", "utilization"}, "sampler");
        cfg.sampler.enabled = s.value("enabled", false);
        cfg.sampler.utilization = s.value("utilization", 0.005);
    }

    validate(cfg);
    return cfg;
}

nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
    json doc;
    doc["name"] = cfg.name;
    doc["space"] = json::array({cfg.space.begin, cfg.space.end});
    doc["time_steps"] = cfg.time_steps;
    doc["seed"] = cfg.seed;
    doc["n_workers"] = cfg.n_workers;
    doc["sched_partition_cost_ms"] = cfg.sched_partition_cost_ms;
    doc["scheduler"] = json{
        {"kind", cfg.scheduler == SchedulerKind::Dynamic ? "dynamic" : "bulk_oracle"},
        {"gpu_chunk", cfg.gpu_chunk},
        {"gpu_percent", cfg.gpu_percent}};
    doc["dispatch"] = json{
        {"kind", cfg.dispatch.kind == DispatchKind::RoundRobinSlice ? "round_robin_slice"
                                                                    : "wakeup_priority_boost"},
        {"quantum_ms", cfg.dispatch.quantum_ms},
        {"base_dispatch_latency_ms", cfg.dispatch.base_dispatch_latency_ms},
        {"preemption_cost_ms", cfg.dispatch.preemption_cost_ms},
        {"wakeup_slice_ms", cfg.dispatch.wakeup_slice_ms}};
    json host{{"priority", cfg.host.priority == ThreadPriority::Boosted ? "boosted" : "normal"}};
    if (cfg.host.pin) {
        host["pin"] =
            json{{"class", device_class_name(cfg.host.pin->cls)}, {"index", cfg.host.pin->index}};
    } else {
        host["pin"] = nullptr;
    }
    doc["host"] = host;
    json curve = json::array();
    for (const auto& [size, rate] : cfg.gpu.curve.anchors()) {
        curve.push_back(json::array({size, rate}));
    }
    doc["gpu"] = json{{"num_eu", cfg.gpu.num_eu},
                      {"preferred_multiple", cfg.gpu.preferred_multiple},
                      {"launch_latency_ms", cfg.gpu.launch_latency_ms},
                      {"h2d", cost_to_json(cfg.gpu.h2d)},
                      {"d2h", cost_to_json(cfg.gpu.d2h)},
                      {"bytes_per_iteration", cfg.gpu.bytes_per_iteration},
                      {"curve", curve},
                      {"power_active_w", cfg.gpu.power_active_w},
                      {"power_idle_w", cfg.gpu.power_idle_w},
                      {"fill_factor", cfg.gpu.fill_factor},
                      {"idle_cap", cfg.gpu.idle_cap}};
    doc["big_cores"] = cpu_to_json(cfg.big_core, cfg.n_big_cores);
    doc["little_cores"] = cpu_to_json(cfg.little_core, cfg.n_little_cores);
    doc["partitioner"] = json{{"min_cpu_chunk", cfg.partitioner.min_cpu_chunk},
                              {"bootstrap_fraction", cfg.partitioner.bootstrap_fraction},
                              {"train_epsilon", cfg.partitioner.train_epsilon},
                              {"train_patience", cfg.partitioner.train_patience}};
    doc["power"] = json{{"sample_rate_hz", cfg.power.sample_rate_hz},
                        {"sensor_refresh_ms", cfg.power.sensor_refresh_ms},
                        {"memory_baseline_w", cfg.power.memory_baseline_w},
                        {"memory_transfer_w", cfg.power.memory_transfer_w}};
    doc["sampler"] = json{{"enabled", cfg.sampler.enabled},
                          {"utilization", cfg.sampler.utilization}};
    return doc;
}

ScenarioConfig load_scenario_file(const std::filesystem::path& file,
                                  const std::filesystem::path& preset_dir) {
    std::ifstream in(file);
    if (!in) fail("cannot open scenario file " + file.string());
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        fail("parse error in " + file.string() + ": " + e.what());
    }
    return scenario_from_json(doc, preset_dir);
}

void apply_thread_flag(ScenarioConfig& cfg, const std::string& flag) {
    const auto plus = flag.find('+');
    if (plus == std::string::npos || flag.substr(plus + 1) != "1") {
        fail("thread flag must look like 'W+1', got '" + flag + "'");
    }
    int workers = 0;
    try {
        workers = std::stoi(flag.substr(0, plus));
    } catch (const std::exception&) {
        fail("thread flag must look like 'W+1', got '" + flag + "'");
    }
    if (workers < 0) fail("worker count must be >= 0");
    cfg.n_workers = workers;
}

ExperimentSuite load_suite_file(const std::filesystem::path& file,
                                const std::filesystem::path& preset_dir) {
    std::ifstream in(file);
    if (!in) fail("cannot open suite file " + file.string());
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        fail("parse error in " + file.string() + ": " + e.what());
    }
    check_keys(doc, {"baseline", "scenarios"}, "suite");
    ExperimentSuite suite;
    suite.baseline = need(doc, "baseline").get<std::string>();
    const json& list = need(doc, "scenarios");
    if (!list.is_array() || list.empty()) fail("suite needs a non-empty 'scenarios' array");
    std::set<std::string> names;
    bool have_baseline = false;
    for (const json& s : list) {
        suite.scenarios.push_back(scenario_from_json(s, preset_dir));
        const std::string& name = suite.scenarios.back().name;
        if (!names.insert(name).second) fail("duplicate scenario name '" + name + "'");
        have_baseline = have_baseline || name == suite.baseline;
    }
    if (!have_baseline) fail("baseline '" + suite.baseline + "' is not among the scenarios");
    return suite;
}

}  // namespace hetsched
