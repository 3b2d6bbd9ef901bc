#include "nwram/bench.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace nwram;

OperationSequence parse_ops(const std::string& spec) {
    OperationSequence seq;
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok == "write0") seq.push_back(Op::write(0));
        else if (tok == "write1") seq.push_back(Op::write(1));
        else if (tok == "read") seq.push_back(Op::read());
        else if (tok == "restore") seq.push_back(Op::restore());
        else if (tok.rfind("idle:", 0) == 0) seq.push_back(Op::idle(std::stod(tok.substr(5))));
        else throw std::invalid_argument("unknown operation token: " + tok +
                                         " (expected write0|write1|read|restore|idle:<s>)");
    }
    if (seq.empty()) throw std::invalid_argument("empty operation sequence");
    return seq;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

int run(int argc, char** argv) {
    CLI::App app{"transient memory-cell simulator and benchmark suite"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global flags after the subcommand
    std::string config_path, out_dir = ".";
    app.add_option("--config", config_path, "JSON configuration file (see README)");
    app.add_option("--out", out_dir, "output directory");

    auto* sim_cmd = app.add_subcommand("simulate", "run an operation sequence on one cell");
    std::string cell_name = "NWRAM_10T", ops_spec = "write1,read", nodes_spec;
    int stored = 0;
    sim_cmd->add_option("--cell", cell_name, "cell kind (NWRAM_10T only for sequences)");
    sim_cmd->add_option("--ops", ops_spec, "comma list: write0|write1|read|restore|idle:<s>");
    sim_cmd->add_option("--nodes", nodes_spec, "comma list of nodes to export (default: all)");
    sim_cmd->add_option("--store", stored, "initial stored bit")->check(CLI::Range(0, 1));

    auto* bench_cmd = app.add_subcommand("bench", "full benchmark report (CSV + JSON)");
    auto* area_cmd = app.add_subcommand("area", "cell area bound table");
    auto* ret_cmd = app.add_subcommand("retention", "maximum restore interval search");

    CLI11_PARSE(app, argc, argv);

    const ToolConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path out(out_dir);

    if (sim_cmd->parsed()) {
        const CellKind kind = parse_cell_kind(cell_name);
        if (kind != CellKind::NWRAM_10T)
            throw std::invalid_argument("operation sequences drive the NWRAM cell; SRAM cells "
                                        "are exercised through `bench`");
        const CellBench cb = make_cell_bench(cfg, kind);
        const OperationSequence seq = parse_ops(ops_spec);
        std::vector<std::string> ports;
        for (const auto& [name, idx] : cb.circuit.ports) ports.push_back(name);
        const auto drives = lower(seq, cb.clock, ports);
        SimConfig sim = cfg.sim;
        sim.t_end = sequence_duration(seq, cb.clock);
        if (sim.t_end > 10e-9) {
            sim.sample_interval = std::max(sim.sample_interval, sim.t_end / 20000.0);
            sim.dt_max = sim.sample_interval;
        }
        const auto r = run_transient(cb.circuit, drives, stored_init(kind, cb.vdd, stored), sim);
        std::vector<std::string> nodes;
        if (!nodes_spec.empty()) {
            std::istringstream in(nodes_spec);
            for (std::string tok; std::getline(in, tok, ',');) nodes.push_back(tok);
        }
        write_file(out / "simulate.csv", r.csv(nodes));
        std::cout << "wrote " << (out / "simulate.csv").string() << " ("
                  << r.times.size() << " samples)\n";
    } else if (bench_cmd->parsed()) {
        const Report rep = run_benchmark(cfg);
        write_file(out / "report.csv", report_csv(rep));
        write_file(out / "report.json", report_json(rep));
        std::cout << report_csv(rep);
    } else if (area_cmd->parsed()) {
        write_file(out / "area.csv", area_report_csv());
        std::cout << area_report_csv();
    } else if (ret_cmd->parsed()) {
        const double t = find_max_restore_interval(cfg);
        nlohmann::json j;
        j["max_restore_interval_s"] = t;
        write_file(out / "retention.json", j.dump(2));
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
