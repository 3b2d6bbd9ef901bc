#include "nwram/bench.hpp"

#include <algorithm>
#include <future>
#include <cmath>
#include <json.hpp>
#include <sstream>

namespace nwram {

void Thresholds::check() const {
    if (!(v_low_ok < sense && sense < v_high_ok))
        throw std::invalid_argument("thresholds: require v_low_ok < sense < v_high_ok");
}

Thresholds make_thresholds(double vdd, double vth, bool rail_driven_high) {
    if (!(vdd > 0)) throw std::invalid_argument("thresholds: vdd must be > 0");
    Thresholds th;
    th.v_high_ok = rail_driven_high ? 0.9 * vdd : vdd - vth - 0.05;
    th.v_low_ok = 0.1 * vdd;
    th.sense = 0.5 * vdd;
    th.check();
    return th;
}

std::optional<double> measure_write_time(const TransientResult& r,
                                         const std::vector<std::string>& storage_nodes,
                                         const Thresholds& th, double eval_phase_start) {
    th.check();
    if (storage_nodes.empty()) throw std::invalid_argument("measure_write_time: no storage nodes");
    double worst = 0;
    for (const auto& name : storage_nodes) {
        const auto& v = r.voltages[r.node_series(name)];
        const double fin = v.back();
        const bool high = fin > th.sense;
        if (high ? fin < th.v_high_ok : fin > th.v_low_ok) return std::nullopt;

        // Last sample still on the wrong side of sense; the settle instant is
        // the crossing right after it.
        double cross = eval_phase_start;
        for (size_t j = v.size(); j-- > 0;) {
            const bool beyond = high ? v[j] >= th.sense : v[j] <= th.sense;
            if (beyond) continue;
            const double t0 = r.times[j], t1 = r.times[j + 1];
            cross = t0 + (t1 - t0) * (th.sense - v[j]) / (v[j + 1] - v[j]);
            break;
        }
        worst = std::max(worst, std::max(0.0, cross - eval_phase_start));
    }
    return worst;
}

std::optional<double> measure_read_time(const TransientResult& r, const std::string& enable_node,
                                        const std::string& bitline_node, const Thresholds& th,
                                        double enable_v_high) {
    th.check();
    if (!(enable_v_high > 0)) throw std::invalid_argument("measure_read_time: bad enable swing");
    const auto& e = r.voltages[r.node_series(enable_node)];
    const double half = 0.5 * enable_v_high;
    const double onset_level = 0.05 * enable_v_high;
    double t50 = -1, t_on = -1;
    for (size_t j = 1; j < e.size(); ++j) {
        if (t_on < 0 && e[j - 1] < onset_level && e[j] >= onset_level)
            t_on = r.times[j - 1] + (r.times[j] - r.times[j - 1]) * (onset_level - e[j - 1]) /
                                        (e[j] - e[j - 1]);
        if (e[j - 1] < half && e[j] >= half) {
            t50 = r.times[j - 1] +
                  (r.times[j] - r.times[j - 1]) * (half - e[j - 1]) / (e[j] - e[j - 1]);
            break;
        }
    }
    if (t50 < 0) return std::nullopt;

    const auto& b = r.voltages[r.node_series(bitline_node)];
    for (size_t j = 1; j < b.size(); ++j) {
        if (r.times[j] <= t_on) continue;
        if (b[j - 1] >= th.sense && b[j] < th.sense) {
            const double cross = r.times[j - 1] + (r.times[j] - r.times[j - 1]) *
                                                      (b[j - 1] - th.sense) / (b[j - 1] - b[j]);
            return std::max(0.0, cross - t50);
        }
    }
    return std::nullopt;
}

double measure_power(const TransientResult& r, const std::string& source, double t0, double t1) {
    return supply_energy(r, source, t0, t1) / (t1 - t0);
}

double measure_power(const TransientResult& r, double t0, double t1) {
    double e = 0;
    for (const auto& s : r.source_names) e += supply_energy(r, s, t0, t1);
    return e / (t1 - t0);
}

std::map<std::string, double> stored_init(CellKind kind, double vdd, int bit) {
    if (kind == CellKind::NWRAM_10T)
        return {{"out", bit ? vdd : 0.0}, {"nout", bit ? 0.0 : vdd}};
    return {{"q", bit ? vdd : 0.0}, {"nq", bit ? 0.0 : vdd}};
}

namespace {

Waveform flat(double v) {
    Waveform w;
    w.add(0.0, v);
    return w;
}

void add_pulse(Waveform& w, const ClockScheme& s, double t0) {
    if (w.breakpoints.empty()) w.add(0.0, s.v_low);
    if (w.breakpoints.back().first < t0) w.add(t0, w.breakpoints.back().second);
    w.add(t0 + s.rise_fall, s.v_high);
    w.add(t0 + s.phase_width - s.rise_fall, s.v_high);
    w.add(t0 + s.phase_width, s.v_low);
}

std::vector<std::string> port_names(const Circuit& c) {
    std::vector<std::string> names;
    for (const auto& [name, idx] : c.ports) names.push_back(name);
    return names;
}

bool eight_t(CellKind k) { return k == CellKind::SRAM_8T_HP || k == CellKind::SRAM_8T_LP; }

TransientResult run_scenario(const CellBench& cb, const std::map<std::string, PortDrive>& drives,
                             const std::map<std::string, double>& init, SimConfig sim,
                             double t_end, bool relaxed) {
    sim.t_end = t_end;
    if (relaxed) {
        // Long scenarios: let the stability bound govern the step instead of
        // dt_max so idle stretches advance at the sampling rate.
        sim.sample_interval = std::max(sim.sample_interval, t_end / 20000.0);
        sim.dt_max = sim.sample_interval;
    }
    return run_transient(cb.circuit, drives, init, sim);
}

std::optional<double> write_time_metric(const ToolConfig& cfg, const CellBench& cb) {
    double worst = 0;
    for (int bit : {0, 1}) {
        std::map<std::string, PortDrive> drives;
        std::vector<std::string> storage;
        double t0 = 0, t_end = 0;
        if (cb.kind == CellKind::NWRAM_10T) {
            drives = lower({Op::write(bit)}, cb.clock, port_names(cb.circuit));
            storage = {"out", "nout"};
            t0 = write_final_eval_start(cb.clock, 0);
            t_end = cb.clock.period;
        } else {
            drives["bit0"] = PortDrive{flat(bit ? cb.vdd : 0.0), {}};
            drives["nbit0"] = PortDrive{flat(bit ? 0.0 : cb.vdd), {}};
            drives["wl"] = PortDrive{flat(0.0), {}};
            t0 = slot_start(cb.clock, 0, 1);
            add_pulse(drives["wl"].wave, cb.clock, t0);
            if (eight_t(cb.kind)) {
                drives["rwl"] = PortDrive{flat(0.0), {}};
                drives["rbl"] = PortDrive{flat(cb.vdd), {}};
            }
            storage = {"q", "nq"};
            t_end = 2 * (cb.clock.phase_width + cb.clock.gap);
        }
        const auto r = run_scenario(cb, drives, stored_init(cb.kind, cb.vdd, 1 - bit), cfg.sim,
                                    t_end, false);
        const auto wt = measure_write_time(r, storage, cb.th, t0);
        if (!wt) return std::nullopt;
        worst = std::max(worst, *wt);
    }
    return worst;
}

std::optional<double> read_time_metric(const ToolConfig& cfg, const CellBench& cb) {
    const double t_end = 2 * (cb.clock.phase_width + cb.clock.gap);
    const double t_pulse = slot_start(cb.clock, 0, 1);
    std::map<std::string, PortDrive> drives;
    std::string enable, bitline;
    if (cb.kind == CellKind::NWRAM_10T) {
        drives = lower({Op::read()}, cb.clock, port_names(cb.circuit));
        enable = "read0";
        bitline = "bit0";
    } else if (!eight_t(cb.kind)) {
        drives["wl"] = PortDrive{flat(0.0), {}};
        add_pulse(drives["wl"].wave, cb.clock, t_pulse);
        drives["bit0"] = PortDrive{flat(cb.vdd), {{cb.clock.phase_width, t_end}}};
        drives["nbit0"] = PortDrive{flat(cb.vdd), {{cb.clock.phase_width, t_end}}};
        enable = "wl";
        bitline = "bit0";
    } else {
        drives["wl"] = PortDrive{flat(0.0), {}};
        drives["bit0"] = PortDrive{flat(cb.vdd), {}};
        drives["nbit0"] = PortDrive{flat(cb.vdd), {}};
        drives["rwl"] = PortDrive{flat(0.0), {}};
        add_pulse(drives["rwl"].wave, cb.clock, t_pulse);
        drives["rbl"] = PortDrive{flat(cb.vdd), {{cb.clock.phase_width, t_end}}};
        enable = "rwl";
        bitline = "rbl";
    }
    const auto r =
        run_scenario(cb, drives, stored_init(cb.kind, cb.vdd, 0), cfg.sim, t_end, false);
    return measure_read_time(r, enable, bitline, cb.th, cb.clock.v_high);
}

// Steady discharge power: bit line held by its driver while the read path
// conducts; averaged over the flat top of the enable pulse.
std::optional<double> active_power_metric(const ToolConfig& cfg, const CellBench& cb) {
    const double t_pulse = cb.clock.gap;
    const double t_end = t_pulse + cb.clock.phase_width + cb.clock.gap;
    std::map<std::string, PortDrive> drives;
    std::string enable;
    if (cb.kind == CellKind::NWRAM_10T) {
        for (const auto& name : port_names(cb.circuit))
            if (name != "out" && name != "nout") drives[name] = PortDrive{flat(0.0), {}};
        drives["bit0"] = PortDrive{flat(cb.vdd), {}};
        enable = "read0";
    } else {
        drives["wl"] = PortDrive{flat(0.0), {}};
        drives["bit0"] = PortDrive{flat(cb.vdd), {}};
        drives["nbit0"] = PortDrive{flat(cb.vdd), {}};
        enable = "wl";
        if (eight_t(cb.kind)) {
            drives["rwl"] = PortDrive{flat(0.0), {}};
            drives["rbl"] = PortDrive{flat(cb.vdd), {}};
            enable = "rwl";
        }
    }
    add_pulse(drives[enable].wave, cb.clock, t_pulse);
    const auto r =
        run_scenario(cb, drives, stored_init(cb.kind, cb.vdd, 0), cfg.sim, t_end, false);
    return measure_power(r, t_pulse + cb.clock.rise_fall,
                         t_pulse + cb.clock.phase_width - cb.clock.rise_fall);
}

std::optional<double> leakage_metric(const ToolConfig& cfg, const CellBench& cb) {
    double worst = 0;
    for (int bit : {0, 1}) {
        std::map<std::string, PortDrive> drives;
        if (cb.kind == CellKind::NWRAM_10T) {
            for (const auto& name : port_names(cb.circuit))
                if (name != "out" && name != "nout") drives[name] = PortDrive{flat(0.0), {}};
        } else {
            drives["wl"] = PortDrive{flat(0.0), {}};
            drives["bit0"] = PortDrive{flat(cb.vdd), {}};
            drives["nbit0"] = PortDrive{flat(cb.vdd), {}};
            if (eight_t(cb.kind)) {
                drives["rwl"] = PortDrive{flat(0.0), {}};
                drives["rbl"] = PortDrive{flat(cb.vdd), {}};
            }
        }
        const double t_end = cfg.leakage_idle;
        const auto r = run_scenario(cb, drives, stored_init(cb.kind, cb.vdd, bit), cfg.sim, t_end,
                                    true);
        worst = std::max(worst, measure_power(r, 0.2 * t_end, t_end));
    }
    return worst;
}

std::pair<double, double> area_bounds(const ToolConfig& cfg, CellKind kind) {
    if (kind == CellKind::SRAM_6T_HP || kind == CellKind::SRAM_6T_LP) {
        double lo = 1e9, hi = 0;
        for (const auto& col : sram_scaling_columns())
            for (double a : col.area_um2) {
                lo = std::min(lo, a * 1e-12);
                hi = std::max(hi, a * 1e-12);
            }
        return {lo, hi};
    }
    const CellGeometry g = cfg.geometry.at(kind);
    return {cell_area(g, 40e-9), cell_area(g, 60e-9)};
}

bool restore_trial_one(const ToolConfig& cfg, const CellBench& cb, double idle, int bit) {
    OperationSequence seq{Op::write(bit)};
    if (idle > 0) seq.push_back(Op::idle(idle));
    seq.push_back(Op::restore());
    seq.push_back(Op::read());
    const auto drives = lower(seq, cb.clock, port_names(cb.circuit));
    const double total = sequence_duration(seq, cb.clock);
    const auto r = run_scenario(cb, drives, stored_init(cb.kind, cb.vdd, 1 - bit), cfg.sim, total,
                                true);
    // Probe the floating bit line just before the sequence ends; the sensed
    // value is the side of the sense level the line ends on.
    const double v = r.at("bit0", total - cb.clock.gap);
    return bit ? v > cb.th.sense : v < cb.th.sense;
}

}  // namespace

CellBench make_cell_bench(const ToolConfig& cfg, CellKind kind) {
    const auto devs = cfg.devices();
    CellBench cb;
    cb.kind = kind;
    cb.clock = cfg.clock_for(kind);
    cb.vdd = cfg.vdd_of(kind);
    const int cells = std::max(1, cfg.column_cells);
    PortParasitics par = cfg.parasitics_for(kind);
    auto load_line = [&](const std::string& p, double per_cell_devices) {
        par.cap[p] = cells * par.cap[p] + (cells - 1) * per_cell_devices;
    };
    if (kind == CellKind::NWRAM_10T) {
        const auto& dev = devs.at(DeviceKind::XNWFET_2C);
        const DeviceCaps unit = dev.device_caps(1.0);
        const DeviceCaps rd = dev.device_caps(cfg.nwram_read_mult);
        load_line("bit0", 2 * unit.c_gate + rd.c_drain);
        load_line("read0", rd.c_gate);
        cb.th = make_thresholds(cb.vdd, cfg.device_params.at(DeviceKind::XNWFET_2C).vth, false);
    } else {
        const bool hp = kind == CellKind::SRAM_6T_HP || kind == CellKind::SRAM_8T_HP;
        const auto& dev = devs.at(hp ? DeviceKind::PTM_HP_N : DeviceKind::PTM_LP_N);
        const DeviceCaps pass = dev.device_caps(cfg.sizing.pass_mult);
        load_line("bit0", pass.c_drain);
        load_line("nbit0", pass.c_drain);
        if (eight_t(kind)) load_line("rbl", pass.c_drain);
        cb.th = make_thresholds(cb.vdd, 0.0, true);
    }
    cb.circuit = build_cell(kind, devs, cfg.sizing, par, cfg.nwram_read_mult);
    return cb;
}

bool restore_trial(const ToolConfig& cfg, double idle) {
    const CellBench cb = make_cell_bench(cfg, CellKind::NWRAM_10T);
    return restore_trial_one(cfg, cb, idle, 0) && restore_trial_one(cfg, cb, idle, 1);
}

double find_max_restore_interval(const ToolConfig& cfg) {
    const CellBench cb = make_cell_bench(cfg, CellKind::NWRAM_10T);
    auto trial = [&](double idle) {
        return restore_trial_one(cfg, cb, idle, 0) && restore_trial_one(cfg, cb, idle, 1);
    };
    if (!trial(0)) throw BenchError("restore fails at T = 0: protocol defect");
    double lo = 0, hi = cb.clock.period;
    while (trial(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > 1e-4) throw BenchError("no restore failure below 100 us of idle");
    }
    while (hi - lo > cfg.restore_tolerance * hi) {
        const double mid = 0.5 * (lo + hi);
        (trial(mid) ? lo : hi) = mid;
    }
    return lo;
}

bool self_restore_check(const ToolConfig& cfg, int cycles) {
    if (cycles < 1) throw std::invalid_argument("self_restore_check: cycles must be >= 1");
    const CellBench cb = make_cell_bench(cfg, CellKind::NWRAM_10T);
    OperationSequence seq{Op::write(1)};
    for (int i = 0; i < cycles; ++i) seq.push_back(Op::restore());
    const auto drives = lower(seq, cb.clock, port_names(cb.circuit));
    const double total = sequence_duration(seq, cb.clock);
    const auto r =
        run_scenario(cb, drives, stored_init(cb.kind, cb.vdd, 0), cfg.sim, total, true);
    const double out = r.voltages[r.node_series("out")].back();
    const double nout = r.voltages[r.node_series("nout")].back();
    return out >= cb.th.v_high_ok && nout <= cb.th.v_low_ok;
}

ArrayCheckResult array_functional_check(const ToolConfig& cfg, int rows, int cols) {
    const auto devs = cfg.devices();
    const Circuit array = build_nwram_array(rows, cols, devs, cfg.parasitics_for(CellKind::NWRAM_10T),
                                            cfg.nwram_read_mult);
    const ClockScheme clock = cfg.clock_for(CellKind::NWRAM_10T);
    const double vdd = cfg.vdd_of(CellKind::NWRAM_10T);
    const Thresholds th =
        make_thresholds(vdd, cfg.device_params.at(DeviceKind::XNWFET_2C).vth, false);
    const auto background = [](int r, int c) { return (r + c) % 2; };
    const auto cell_prefix = [](int r, int c) {
        return "c" + std::to_string(r) + "_" + std::to_string(c) + "_";
    };

    ArrayCheckResult result;
    const double t_end = clock.period + 2 * (clock.phase_width + clock.gap);
    // Trials are independent: run them concurrently, merge in deterministic order.
    std::vector<std::future<std::vector<std::string>>> trials;
    for (int tr = 0; tr < rows; ++tr) {
        for (int tc = 0; tc < cols; ++tc) {
            for (int bit : {0, 1}) {
                trials.push_back(std::async(std::launch::async, [&, tr, tc, bit] {
                std::vector<std::string> failures;
                auto drives = empty_array_drives(rows, cols);
                drives = lower_row_write({tc, bit, cols}, clock, tr, 0, std::move(drives));
                drives = lower_row_read(tr, cols, clock, clock.period, std::move(drives));
                std::map<std::string, double> init;
                for (int i = 0; i < rows; ++i)
                    for (int j = 0; j < cols; ++j) {
                        const int b = background(i, j);
                        init[cell_prefix(i, j) + "out"] = b ? vdd : 0.0;
                        init[cell_prefix(i, j) + "nout"] = b ? 0.0 : vdd;
                    }
                SimConfig sim = cfg.sim;
                sim.t_end = t_end;
                sim.sample_interval = std::max(sim.sample_interval, t_end / 20000.0);
                sim.dt_max = sim.sample_interval;
                // level check, not a timing measurement: a coarser step is fine
                sim.stability_factor = 0.4;
                const auto r = run_transient(array, drives, init, sim);

                const std::string tag = "write " + std::to_string(bit) + " at (" +
                                        std::to_string(tr) + "," + std::to_string(tc) + "): ";
                const double t_probe = t_end - clock.gap;
                for (int j = 0; j < cols; ++j) {
                    const int expect = j == tc ? bit : background(tr, j);
                    const double v = r.at(array_bit_port(j), t_probe);
                    if (expect ? v <= th.sense : v >= th.sense)
                        failures.push_back(tag + "readback of column " + std::to_string(j) +
                                           " = " + std::to_string(v));
                }
                for (int i = 0; i < rows; ++i)
                    for (int j = 0; j < cols; ++j) {
                        const int expect = (i == tr && j == tc) ? bit : background(i, j);
                        const double out = r.voltages[r.node_series(cell_prefix(i, j) + "out")].back();
                        const double nout =
                            r.voltages[r.node_series(cell_prefix(i, j) + "nout")].back();
                        const bool ok = expect ? (out >= th.v_high_ok && nout <= th.v_low_ok)
                                               : (out <= th.v_low_ok && nout >= th.v_high_ok);
                        if (!ok)
                            failures.push_back(tag + "storage of (" + std::to_string(i) + "," +
                                               std::to_string(j) + ") disturbed");
                    }
                return failures;
                }));
            }
        }
    }
    for (auto& f : trials)
        for (auto& line : f.get()) result.failures.push_back(std::move(line));
    result.ok = result.failures.empty();
    return result;
}

Metrics measure_cell(const ToolConfig& cfg, CellKind kind, bool with_retention) {
    Metrics m;
    const auto [lo, hi] = area_bounds(cfg, kind);
    m.area_low = lo;
    m.area_high = hi;
    const CellBench cb = make_cell_bench(cfg, kind);
    auto guarded = [&](const char* scenario, auto&& fn) -> std::optional<double> {
        try {
            return fn();
        } catch (const std::exception& e) {
            throw BenchError(std::string(to_string(kind)) + "/" + scenario + ": " + e.what());
        }
    };
    m.write_time = guarded("write", [&] { return write_time_metric(cfg, cb); });
    m.read_time = guarded("read", [&] { return read_time_metric(cfg, cb); });
    m.active_power_read = guarded("active_power", [&] { return active_power_metric(cfg, cb); });
    m.leakage_power = guarded("leakage", [&] { return leakage_metric(cfg, cb); });
    if (with_retention && kind == CellKind::NWRAM_10T)
        m.max_restore_interval =
            guarded("retention", [&]() -> std::optional<double> {
                return find_max_restore_interval(cfg);
            });
    return m;
}

Report run_benchmark(const ToolConfig& cfg, const std::vector<CellKind>& cells) {
    Report rep;
    for (CellKind k : cells) rep.cells[k] = measure_cell(cfg, k);

    auto it = rep.cells.find(CellKind::NWRAM_10T);
    if (it != rep.cells.end()) {
        const Metrics& n = it->second;
        for (const auto& [k, m] : rep.cells) {
            if (k == CellKind::NWRAM_10T) continue;
            const std::string name = to_string(k);
            if (m.write_time && n.write_time && *n.write_time > 0)
                rep.ratios["write_time_" + name + "_over_NWRAM"] = *m.write_time / *n.write_time;
            if (m.read_time && n.read_time && *n.read_time > 0)
                rep.ratios["read_time_" + name + "_over_NWRAM"] = *m.read_time / *n.read_time;
            if (m.leakage_power && n.leakage_power && *n.leakage_power > 0)
                rep.ratios["leakage_" + name + "_over_NWRAM"] =
                    *m.leakage_power / *n.leakage_power;
            if (m.active_power_read && n.active_power_read && *m.active_power_read > 0)
                rep.ratios["active_power_NWRAM_over_" + name] =
                    *n.active_power_read / *m.active_power_read;
        }
    }
    rep.notes.push_back("active read power: all-supply power over the flat top of the enable "
                        "pulse with the bit line held by its driver (steady discharge)");
    rep.notes.push_back("leakage: all-supply power over an idle stored state, SRAM bit lines "
                        "held high, worst of both stored polarities");
    rep.notes.push_back("bit lines loaded with " + std::to_string(cfg.column_cells) +
                        " cells of wire and access-device capacitance");
    rep.notes.push_back(std::string("clock high level: ") +
                        (cfg.boosted_clocks ? "boosted (Vdd + Vth)" : "Vdd"));
    return rep;
}

namespace {

std::string opt_str(const std::optional<double>& v) {
    if (!v) return "";
    std::ostringstream out;
    out.precision(9);
    out << *v;
    return out.str();
}

}  // namespace

std::string report_csv(const Report& report) {
    std::ostringstream out;
    out.precision(9);
    out << "cell,write_time_s,read_time_s,active_power_read_w,leakage_power_w,"
           "max_restore_interval_s,area_low_m2,area_high_m2\n";
    for (const auto& [k, m] : report.cells)
        out << to_string(k) << "," << opt_str(m.write_time) << "," << opt_str(m.read_time) << ","
            << opt_str(m.active_power_read) << "," << opt_str(m.leakage_power) << ","
            << opt_str(m.max_restore_interval) << "," << m.area_low << "," << m.area_high << "\n";
    out << "\nratio,value\n";
    for (const auto& [name, v] : report.ratios) out << name << "," << v << "\n";
    return out.str();
}

std::string report_json(const Report& report) {
    nlohmann::json j;
    for (const auto& [k, m] : report.cells) {
        nlohmann::json c;
        auto put = [&](const char* key, const std::optional<double>& v) {
            if (v) c[key] = *v;
            else c[key] = nullptr;
        };
        put("write_time_s", m.write_time);
        put("read_time_s", m.read_time);
        put("active_power_read_w", m.active_power_read);
        put("leakage_power_w", m.leakage_power);
        put("max_restore_interval_s", m.max_restore_interval);
        c["area_low_m2"] = m.area_low;
        c["area_high_m2"] = m.area_high;
        j["cells"][to_string(k)] = c;
    }
    j["ratios"] = report.ratios;
    j["notes"] = report.notes;
    return j.dump(2);
}

}  // namespace nwram
