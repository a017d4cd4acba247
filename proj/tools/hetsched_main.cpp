#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "hetsched/errors.hpp"
#include "hetsched/metrics.hpp"
#include "hetsched/scenario.hpp"
#include "hetsched/sweep.hpp"
#include "hetsched/trace_io.hpp"

namespace fs = std::filesystem;
using namespace hetsched;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRun = 1;
constexpr int kExitParse = 2;
constexpr int kExitTraining = 3;

struct CommonOpts {
    std::string scenario_file;
    std::string out_dir = ".";
    std::string format = "csv";
    std::string backend = "sim";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> threads;   // "W+1"
    std::optional<std::string> policy;    // rr | wakeup
    std::optional<std::string> priority;  // normal | boosted
    std::optional<std::string> pin_host;  // big | little | none
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_scenario = true) {
    if (with_scenario) {
        cmd->add_option("--scenario", o.scenario_file, "scenario file (JSON)")->required();
    }
    cmd->add_option("--seed", o.seed, "override the scenario seed");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--backend", o.backend, "execution backend")
        ->check(CLI::IsMember({"sim", "threads"}));
    cmd->add_option("--threads", o.threads, "thread count label, e.g. 4+1");
    cmd->add_option("--policy", o.policy, "dispatch policy")
        ->check(CLI::IsMember({"rr", "round_robin_slice", "wakeup", "wakeup_priority_boost"}));
    cmd->add_option("--priority", o.priority, "host thread priority")
        ->check(CLI::IsMember({"normal", "boosted"}));
    cmd->add_option("--pin-host", o.pin_host, "pin the host thread to a core class")
        ->check(CLI::IsMember({"big", "little", "none"}));
}

ScenarioConfig load_with_overrides(const CommonOpts& o) {
    ScenarioConfig cfg = load_scenario_file(o.scenario_file);
    if (o.seed) cfg.seed = *o.seed;
    if (o.threads) apply_thread_flag(cfg, *o.threads);
    if (o.policy) {
        cfg.dispatch.kind = (*o.policy == "rr" || *o.policy == "round_robin_slice")
                                ? DispatchKind::RoundRobinSlice
                                : DispatchKind::WakeupPriorityBoost;
    }
    if (o.priority) {
        cfg.host.priority =
            *o.priority == "boosted" ? ThreadPriority::Boosted : ThreadPriority::Normal;
    }
    if (o.pin_host) {
        if (*o.pin_host == "none") {
            cfg.host.pin.reset();
        } else {
            cfg.host.pin = DeviceId{
                *o.pin_host == "little" ? DeviceClass::LittleCore : DeviceClass::BigCore, 0};
        }
    }
    validate(cfg);
    return cfg;
}

fs::path out_path(const CommonOpts& o, const std::string& stem, const std::string& ext) {
    fs::create_directories(o.out_dir);
    return fs::path(o.out_dir) / (stem + ext);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

int cmd_train(const CommonOpts& o) {
    const ScenarioConfig cfg = load_with_overrides(o);
    TrainingResult result;
    try {
        result = train_scenario(cfg);
    } catch (const TrainingAborted& e) {
        std::cerr << "training aborted: " << e.what() << " (best so far: " << e.best_size
                  << ")\n";
        return kExitTraining;
    }
    std::ostringstream csv;
    csv << csv_meta_line(cfg) << "\n";
    csv << "chunk_size,lambda\n";
    std::cout << "chunk_size lambda\n";
    for (const auto& [size, lambda] : result.probes) {
        csv << size << ',' << format_double(lambda) << "\n";
        std::cout << size << ' ' << format_double(lambda) << "\n";
    }
    std::cout << "trained G = " << result.chosen << "\n";
    if (o.format == "json") {
        nlohmann::json doc{{"chosen", result.chosen}};
        auto& probes = doc["probes"] = nlohmann::json::array();
        for (const auto& [size, lambda] : result.probes) {
            probes.push_back({{"chunk_size", size}, {"lambda", lambda}});
        }
        write_file(out_path(o, cfg.name + "_train", ".json"), doc.dump(2) + "\n");
    } else {
        write_file(out_path(o, cfg.name + "_train", ".csv"), csv.str());
    }
    return kExitOk;
}

int cmd_run(const CommonOpts& o) {
    const ScenarioConfig cfg = load_with_overrides(o);
    const RunTrace trace = o.backend == "threads" ? run_real_threads(cfg) : run(cfg);
    const OverheadReport ovh = overheads(trace);
    const EnergyReport energy = energy_report(trace, cfg);
    if (o.format == "json") {
        nlohmann::json doc = trace_to_json(trace, cfg);
        doc["overheads"] = overheads_to_json(ovh);
        doc["energy"] = energy_to_json(energy);
        write_file(out_path(o, cfg.name + "_run", ".json"), doc.dump(2) + "\n");
    } else {
        std::ostringstream t, v, e;
        write_trace_csv(t, trace, cfg);
        write_overheads_csv(v, ovh, cfg);
        write_energy_csv(e, energy, cfg);
        write_file(out_path(o, cfg.name + "_trace", ".csv"), t.str());
        write_file(out_path(o, cfg.name + "_overheads", ".csv"), v.str());
        write_file(out_path(o, cfg.name + "_energy", ".csv"), e.str());
    }
    std::cout << cfg.name << ": time_ms=" << format_double(trace.total_time_ms)
              << " energy_j=" << format_double(energy.total_j)
              << " edp=" << format_double(energy.edp_j_s) << "\n";
    return kExitOk;
}

int cmd_sweep(const CommonOpts& o, int step) {
    const ScenarioConfig cfg = load_with_overrides(o);
    const SweepResult sweep = bulk_oracle_search(cfg, step);
    std::ostringstream csv;
    csv << csv_meta_line(cfg) << "\n";
    csv << "percent,time_ms,energy_j,edp_j_s,best\n";
    std::cout << "percent time_ms energy_j edp\n";
    for (const SweepRow& row : sweep.rows) {
        const bool best = row.percent == sweep.best_percent;
        csv << row.percent << ',' << format_double(row.time_ms) << ','
            << format_double(row.energy_j) << ',' << format_double(row.edp_j_s) << ','
            << (best ? 1 : 0) << "\n";
        std::cout << row.percent << ' ' << format_double(row.time_ms) << ' '
                  << format_double(row.energy_j) << ' ' << format_double(row.edp_j_s)
                  << (best ? "  <- best" : "") << "\n";
    }
    if (o.format == "json") {
        nlohmann::json doc{{"best_percent", sweep.best_percent}};
        auto& rows = doc["rows"] = nlohmann::json::array();
        for (const SweepRow& row : sweep.rows) {
            rows.push_back({{"percent", row.percent},
                            {"time_ms", row.time_ms},
                            {"energy_j", row.energy_j},
                            {"edp_j_s", row.edp_j_s}});
        }
        write_file(out_path(o, cfg.name + "_sweep", ".json"), doc.dump(2) + "\n");
    } else {
        write_file(out_path(o, cfg.name + "_sweep", ".csv"), csv.str());
    }
    std::cout << "best percent = " << sweep.best_percent << "\n";
    return kExitOk;
}

int cmd_compare(const CommonOpts& o, const std::string& suite_file) {
    const ExperimentSuite suite = load_suite_file(suite_file);
    const CompareResult result = run_compare(suite);
    std::ostringstream csv;
    csv << "# " << kToolVersion << " baseline=" << result.baseline << "\n";
    csv << "metric,scenario,value\n";
    std::cout << "scenario time_ratio energy_ratio edp_ratio\n";
    for (std::size_t i = 0; i < result.absolute.size(); ++i) {
        const ScenarioMetrics& m = result.absolute[i];
        const CompareRow& n = result.normalized[i];
        csv << "time_ms," << m.name << ',' << format_double(m.time_ms) << "\n";
        csv << "energy_j," << m.name << ',' << format_double(m.energy_j) << "\n";
        csv << "edp_j_s," << m.name << ',' << format_double(m.edp_j_s) << "\n";
        csv << "time_ratio," << m.name << ',' << format_double(n.time_ratio) << "\n";
        csv << "energy_ratio," << m.name << ',' << format_double(n.energy_ratio) << "\n";
        csv << "edp_ratio," << m.name << ',' << format_double(n.edp_ratio) << "\n";
        csv << "o_td," << m.name << ',' << format_double(m.overheads.o_td) << "\n";
        std::cout << m.name << ' ' << format_double(n.time_ratio) << ' '
                  << format_double(n.energy_ratio) << ' ' << format_double(n.edp_ratio) << "\n";
    }
    if (o.format == "json") {
        nlohmann::json doc{{"baseline", result.baseline}};
        auto& rows = doc["scenarios"] = nlohmann::json::array();
        for (std::size_t i = 0; i < result.absolute.size(); ++i) {
            const ScenarioMetrics& m = result.absolute[i];
            const CompareRow& n = result.normalized[i];
            rows.push_back({{"name", m.name},
                            {"time_ms", m.time_ms},
                            {"energy_j", m.energy_j},
                            {"edp_j_s", m.edp_j_s},
                            {"time_ratio", n.time_ratio},
                            {"energy_ratio", n.energy_ratio},
                            {"edp_ratio", n.edp_ratio},
                            {"o_td", m.overheads.o_td}});
        }
        write_file(out_path(o, "compare", ".json"), doc.dump(2) + "\n");
    } else {
        write_file(out_path(o, "compare", ".csv"), csv.str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heterogeneous CPU+GPU loop-scheduling engine"};
    app.require_subcommand(1);

    CommonOpts train_opts, run_opts, sweep_opts, compare_opts;
    int sweep_step = 10;
    std::string suite_file;

    CLI::App* train = app.add_subcommand("train", "train the GPU chunk size offline");
    add_common(train, train_opts);

    CLI::App* run_cmd = app.add_subcommand("run", "run one scenario and write reports");
    add_common(run_cmd, run_opts);

    CLI::App* sweep = app.add_subcommand("sweep-oracle", "exhaustive static-split search");
    add_common(sweep, sweep_opts);
    sweep->add_option("--step", sweep_step, "sweep step in percent (divides 100)");

    CLI::App* compare = app.add_subcommand("compare", "run a suite and normalize vs baseline");
    add_common(compare, compare_opts, /*with_scenario=*/false);
    compare->add_option("--suite", suite_file, "suite file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitParse : kExitOk;
    }

    try {
        if (train->parsed()) return cmd_train(train_opts);
        if (run_cmd->parsed()) return cmd_run(run_opts);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_step);
        if (compare->parsed()) return cmd_compare(compare_opts, suite_file);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const TrainingAborted& e) {
        std::cerr << "training aborted: " << e.what() << "\n";
        return kExitTraining;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRun;
    }
    return kExitOk;
}
