#include "hetsched/trace_io.hpp"

#include <cstdio>

#include "hetsched/scenario.hpp"

namespace hetsched {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::uint64_t scenario_hash(const ScenarioConfig& cfg) {
    const std::string canonical = scenario_to_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string csv_meta_line(const ScenarioConfig& cfg) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "# %s seed=%llu scenario=%016llx", kToolVersion,
                  static_cast<unsigned long long>(cfg.seed),
                  static_cast<unsigned long long>(scenario_hash(cfg)));
    return buf;
}

void write_trace_csv(std::ostream& os, const RunTrace& trace, const ScenarioConfig& cfg) {
    os << csv_meta_line(cfg) << "\n";
    os << "kind,step,device_class,device_index,interval,begin,end,size,start_ms,end_ms,"
          "tc1,tc2,tc3,tg1,tg2,tg3,tg4,tg5\n";
    // GPU rows then CPU rows, each in completion order.
    for (const GpuChunkRecord& c : trace.gpu_chunks) {
        os << "gpu," << c.step << ",gpu,0," << c.interval << ',' << c.begin << ',' << c.end << ','
           << c.size() << ',' << format_double(c.tg1) << ',' << format_double(c.tg5) << ','
           << format_double(c.tc1) << ',' << format_double(c.tc2) << ',' << format_double(c.tc3)
           << ',' << format_double(c.tg1) << ',' << format_double(c.tg2) << ','
           << format_double(c.tg3) << ',' << format_double(c.tg4) << ',' << format_double(c.tg5)
           << "\n";
    }
    for (const CpuChunkRecord& c : trace.cpu_chunks) {
        os << "cpu," << c.step << ',' << device_class_name(c.device.cls) << ','
           << c.device.index << ',' << c.interval << ',' << c.begin << ',' << c.end << ','
           << c.size() << ',' << format_double(c.start_ms) << ',' << format_double(c.end_ms)
           << ",,,,,,,,\n";
    }
}

void write_overheads_csv(std::ostream& os, const OverheadReport& report,
                         const ScenarioConfig& cfg) {
    os << csv_meta_line(cfg) << "\n";
    os << "metric,value\n";
    os << "o_sp," << format_double(report.o_sp) << "\n";
    os << "o_hd," << format_double(report.o_hd) << "\n";
    os << "o_kl," << format_double(report.o_kl) << "\n";
    os << "o_dh," << format_double(report.o_dh) << "\n";
    os << "o_td," << format_double(report.o_td) << "\n";
    os << "total_time_ms," << format_double(report.total_time_ms) << "\n";
}

void write_energy_csv(std::ostream& os, const EnergyReport& report, const ScenarioConfig& cfg) {
    os << csv_meta_line(cfg) << "\n";
    os << "rail,joules\n";
    os << "big," << format_double(report.big_j) << "\n";
    os << "little," << format_double(report.little_j) << "\n";
    os << "gpu," << format_double(report.gpu_j) << "\n";
    os << "memory," << format_double(report.memory_j) << "\n";
    os << "total," << format_double(report.total_j) << "\n";
    os << "edp_j_s," << format_double(report.edp_j_s) << "\n";
    os << "total_time_ms," << format_double(report.total_time_ms) << "\n";
}

nlohmann::json trace_to_json(const RunTrace& trace, const ScenarioConfig& cfg) {
    nlohmann::json doc;
    doc["tool"] = kToolVersion;
    doc["seed"] = cfg.seed;
    doc["scenario_hash"] = scenario_hash(cfg);
    doc["total_time_ms"] = trace.total_time_ms;
    doc["space_size"] = trace.space_size;
    doc["time_steps"] = trace.time_steps;
    doc["step_end_ms"] = trace.step_end_ms;
    doc["warnings"] = trace.warnings;
    auto& gpu = doc["gpu_chunks"] = nlohmann::json::array();
    for (const GpuChunkRecord& c : trace.gpu_chunks) {
        gpu.push_back({{"step", c.step},
                       {"interval", c.interval},
                       {"begin", c.begin},
                       {"end", c.end},
                       {"tc1", c.tc1},
                       {"tc2", c.tc2},
                       {"tc3", c.tc3},
                       {"tg1", c.tg1},
                       {"tg2", c.tg2},
                       {"tg3", c.tg3},
                       {"tg4", c.tg4},
                       {"tg5", c.tg5}});
    }
    auto& cpu = doc["cpu_chunks"] = nlohmann::json::array();
    for (const CpuChunkRecord& c : trace.cpu_chunks) {
        cpu.push_back({{"step", c.step},
                       {"device_class", device_class_name(c.device.cls)},
                       {"device_index", c.device.index},
                       {"interval", c.interval},
                       {"begin", c.begin},
                       {"end", c.end},
                       {"start_ms", c.start_ms},
                       {"end_ms", c.end_ms}});
    }
    return doc;
}

nlohmann::json overheads_to_json(const OverheadReport& r) {
    return nlohmann::json{{"o_sp", r.o_sp},       {"o_hd", r.o_hd},
                          {"o_kl", r.o_kl},       {"o_dh", r.o_dh},
                          {"o_td", r.o_td},       {"total_time_ms", r.total_time_ms}};
}

nlohmann::json energy_to_json(const EnergyReport& r) {
    return nlohmann::json{{"big_j", r.big_j},     {"little_j", r.little_j},
                          {"gpu_j", r.gpu_j},     {"memory_j", r.memory_j},
                          {"total_j", r.total_j}, {"edp_j_s", r.edp_j_s},
                          {"total_time_ms", r.total_time_ms}};
}

}  // namespace hetsched
