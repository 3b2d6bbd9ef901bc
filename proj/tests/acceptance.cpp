// Acceptance gate: six numbered criteria, one pass/fail line each.
// Exit code 0 only when the requested criterion passes.
#include <CLI11.hpp>

#include "nwram/bench.hpp"
#include "nwram/config.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace nwram;

namespace {

struct Checker {
    bool ok = true;
    std::ostringstream why;

    void expect(bool cond, const std::string& what) {
        if (cond) return;
        if (!ok) why << "; ";
        ok = false;
        why << what;
    }
    void expect_close(double got, double want, double rel_tol, const std::string& what) {
        std::ostringstream s;
        s << what << ": got " << got << ", want " << want;
        expect(std::abs(got - want) <= rel_tol * std::abs(want), s.str());
    }
};

// ---- criterion 1: device calibration round trip, 0.1% ----------------------

void criterion_device(Checker& c) {
    constexpr double tol = 1e-3;
    for (DeviceKind k : {DeviceKind::XNWFET_2C, DeviceKind::PTM_HP_N, DeviceKind::PTM_LP_N,
                         DeviceKind::PTM_HP_P, DeviceKind::PTM_LP_P}) {
        const DeviceParams p = device_preset(k);
        const CalibratedDevice d = calibrate(p);
        const double vdd = p.vdd_nominal;
        double ion, ioff;
        if (is_ptype(k)) {
            ion = -d.drain_current(0.0, 0.0, vdd);
            ioff = -d.drain_current(vdd, 0.0, vdd);
        } else {
            ion = d.drain_current(vdd, vdd, 0.0);
            ioff = d.drain_current(0.0, vdd, 0.0);
        }
        c.expect_close(ion, p.ion, tol, std::string(to_string(k)) + " on current");
        c.expect_close(ioff, p.ioff, tol, std::string(to_string(k)) + " off current");
    }
}

// ---- criterion 2: engine oracles -------------------------------------------

Circuit rc_fixture(double cap_a, double cap_b, double ohms, bool to_rail) {
    Circuit c;
    if (to_rail) c.nodes.push_back(Node{"GND", true, 0.0, 0});
    c.nodes.push_back(Node{"a", false, 0, cap_a});
    c.ports["a"] = to_rail ? 1 : 0;
    if (!to_rail) {
        c.nodes.push_back(Node{"b", false, 0, cap_b});
        c.ports["b"] = 1;
    }
    c.resistors.push_back(Resistor{to_rail ? 1 : 0, to_rail ? 0 : 1, ohms});
    return c;
}

void criterion_engine(Checker& c) {
    SimConfig fine;
    fine.dt_max = 1e-12;
    fine.sample_interval = 1e-12;

    // RC decay within 1% at one time constant (tau = 1 ns)
    {
        Circuit f = rc_fixture(1e-15, 0, 1e6, true);
        SimConfig s = fine;
        s.t_end = 1.2e-9;
        const auto r = run_transient(f, {}, {{"a", 1.0}}, s);
        c.expect_close(r.at("a", 1e-9), std::exp(-1.0), 0.01, "RC decay at tau");
    }
    // charge sharing within 0.5% of C1V1/(C1+C2)
    {
        Circuit f = rc_fixture(1e-15, 2e-15, 1e4, false);
        SimConfig s = fine;
        s.t_end = 1e-9;
        const auto r = run_transient(f, {}, {{"a", 1.0}, {"b", 0.0}}, s);
        c.expect_close(r.voltages[r.node_series("a")].back(), 1.0 / 3.0, 0.005,
                       "charge sharing final level");
    }
    // floating storage drift < 10 uV over 100 ns with leakage disabled
    {
        auto devs = device_library();
        devs.at(DeviceKind::XNWFET_2C).ideal_switch = true;
        const Circuit cell = build_cell(CellKind::NWRAM_10T, devs);
        Waveform low;
        low.add(0.0, 0.0);
        std::map<std::string, PortDrive> drives;
        for (const auto& [name, idx] : cell.ports)
            if (name != "out" && name != "nout") drives[name] = PortDrive{low, {}};
        SimConfig s;
        s.t_end = 100e-9;
        s.dt_max = 1e-10;
        s.sample_interval = 1e-10;
        const auto r = run_transient(cell, drives, {{"out", 0.8}, {"nout", 0.0}}, s);
        const double drift = std::max(std::abs(r.voltages[r.node_series("out")].back() - 0.8),
                                      std::abs(r.voltages[r.node_series("nout")].back()));
        std::ostringstream what;
        what << "floating drift " << drift << " V over 100 ns (limit 10 uV)";
        c.expect(drift < 10e-6, what.str());
    }
    // dt halving changes the full write+read trajectory by < 1 mV
    {
        const ToolConfig cfg = default_config();
        const CellBench cb = make_cell_bench(cfg, CellKind::NWRAM_10T);
        std::vector<std::string> ports;
        for (const auto& [name, idx] : cb.circuit.ports) ports.push_back(name);
        const OperationSequence seq{Op::write(1), Op::read()};
        const auto drives = lower(seq, cb.clock, ports);
        SimConfig s = cfg.sim;
        s.t_end = sequence_duration(seq, cb.clock);
        const auto r1 = run_transient(cb.circuit, drives, stored_init(cb.kind, cb.vdd, 0), s);
        s.dt_max /= 2;
        const auto r2 = run_transient(cb.circuit, drives, stored_init(cb.kind, cb.vdd, 0), s);
        double worst = 0;
        for (const char* node : {"out", "nout", "bit0"}) {
            const auto& a = r1.voltages[r1.node_series(node)];
            const auto& b = r2.voltages[r2.node_series(node)];
            for (size_t i = 0; i < a.size() && i < b.size(); ++i)
                worst = std::max(worst, std::abs(a[i] - b[i]));
        }
        std::ostringstream what;
        what << "dt-halving deviation " << worst << " V (limit 1 mV)";
        c.expect(worst < 1e-3, what.str());
    }
}

// ---- criterion 3: 4x4 array functional sweep -------------------------------

void criterion_array(Checker& c) {
    const ToolConfig cfg = default_config();
    const ArrayCheckResult res = array_functional_check(cfg, 4, 4);
    for (size_t i = 0; i < res.failures.size() && i < 4; ++i) c.expect(false, res.failures[i]);
    c.expect(res.ok, "array functional sweep");
}

// ---- criterion 4: restore interval properties ------------------------------

void criterion_restore(Checker& c) {
    ToolConfig cfg = default_config();
    cfg.restore_tolerance = 0.04;  // bisection bracket tighter than the 1.05 fail margin

    double t_star = 0;
    try {
        t_star = find_max_restore_interval(cfg);
    } catch (const std::exception& e) {
        c.expect(false, std::string("restore search: ") + e.what());
        return;
    }
    std::ostringstream what;
    what << "max restore interval " << t_star << " s not finite positive";
    c.expect(t_star > 0 && t_star < 1e-4, what.str());

    c.expect(restore_trial(cfg, 0.0), "restore at T = 0");
    for (double frac : {0.25, 0.5, 0.75, 0.9}) {
        std::ostringstream w2;
        w2 << "restore at T = " << frac << " * T*";
        c.expect(restore_trial(cfg, frac * t_star), w2.str());
    }
    c.expect(!restore_trial(cfg, 1.05 * t_star), "failure above 1.05 * T*");

    // pass/fail over idle time is a single threshold
    bool failed_before = false;
    for (int i = 0; i <= 8; ++i) {
        const double t = 1.4 * t_star * i / 8;
        const bool pass = restore_trial(cfg, t);
        if (!pass) failed_before = true;
        std::ostringstream w3;
        w3 << "re-entrant pass at T = " << t;
        c.expect(!(pass && failed_before), w3.str());
    }

    // the stored high decays monotonically while idle
    {
        const CellBench cb = make_cell_bench(cfg, CellKind::NWRAM_10T);
        Waveform low;
        low.add(0.0, 0.0);
        std::map<std::string, PortDrive> drives;
        for (const auto& [name, idx] : cb.circuit.ports)
            if (name != "out" && name != "nout") drives[name] = PortDrive{low, {}};
        SimConfig s = cfg.sim;
        s.t_end = 2 * t_star;
        s.sample_interval = std::max(s.sample_interval, s.t_end / 20000.0);
        s.dt_max = s.sample_interval;
        const auto r = run_transient(cb.circuit, drives, stored_init(cb.kind, cb.vdd, 1), s);
        const auto& v = r.voltages[r.node_series("out")];
        bool monotone = true;
        for (size_t i = 1; i < v.size(); ++i) monotone &= v[i] <= v[i - 1] + 1e-6;
        c.expect(monotone, "stored-high decay monotone");
        c.expect(v.back() < v.front(), "stored-high decays at all");
    }

    c.expect(self_restore_check(cfg, 100), "self-restoration over 100 cycles");
}

// ---- criterion 5: benchmark ratio targets ----------------------------------

void criterion_ratios(Checker& c) {
    const ToolConfig cfg = default_config();
    const Report rep = run_benchmark(cfg);

    auto ratio = [&](const std::string& name) {
        auto it = rep.ratios.find(name);
        if (it == rep.ratios.end()) {
            c.expect(false, "missing ratio " + name);
            return 0.0;
        }
        return it->second;
    };
    auto at_least = [&](const std::string& name, double target) {
        const double v = ratio(name);
        std::ostringstream what;
        what << name << " = " << v << " (target >= " << target << ")";
        c.expect(v >= target, what.str());
    };

    at_least("write_time_SRAM_8T_HP_over_NWRAM", 1.5);
    at_least("read_time_SRAM_6T_LP_over_NWRAM", 2.0);
    at_least("leakage_SRAM_6T_HP_over_NWRAM", 10.0);
    for (const char* cell : {"SRAM_6T_HP", "SRAM_6T_LP", "SRAM_8T_HP", "SRAM_8T_LP"}) {
        const std::string name = std::string("active_power_NWRAM_over_") + cell;
        const double v = ratio(name);
        std::ostringstream what;
        what << name << " = " << v << " (target in [1.2, 3])";
        c.expect(v >= 1.2 && v <= 3.0, what.str());
    }

    // internal consistency: every ratio equals the quotient of its metrics
    const Metrics& n = rep.cells.at(CellKind::NWRAM_10T);
    for (const auto& [kind, m] : rep.cells) {
        if (kind == CellKind::NWRAM_10T) continue;
        const std::string name = to_string(kind);
        c.expect_close(ratio("write_time_" + name + "_over_NWRAM"),
                       *m.write_time / *n.write_time, 1e-12, "write ratio consistency " + name);
        c.expect_close(ratio("active_power_NWRAM_over_" + name),
                       *n.active_power_read / *m.active_power_read, 1e-12,
                       "power ratio consistency " + name);
    }
}

// ---- criterion 6: area pipeline --------------------------------------------

void criterion_area(Checker& c) {
    const auto& cols = sram_scaling_columns();
    for (int col = 0; col < 4; ++col)
        for (int v = 0; v < 3; ++v) {
            const double area = scale_area(sram_reference_area(col, v), cols[col].area_factor);
            c.expect_close(area, cols[col].area_um2[v] * 1e-12, 1e-12, "scaled area");
            const DesignRules r = scale_rules(sram_reference_rules(col, v),
                                              cols[col].rule_factor);
            c.expect_close(r.m1_half_pitch, cols[col].m1_half_pitch_nm[v] * 1e-9, 1e-12,
                           "scaled half-pitch");
            c.expect_close(r.np_spacing, cols[col].np_spacing_nm[v] * 1e-9, 1e-12,
                           "scaled n-p spacing");
            c.expect_close(r.via_spacing, cols[col].via_spacing_nm[v] * 1e-9, 1e-12,
                           "scaled via spacing");
        }
    // published range and the 1.42 column spot value
    double lo = 1e9, hi = 0;
    for (const auto& col : cols)
        for (double a : col.area_um2) {
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
    c.expect_close(lo, 0.025, 1e-12, "smallest scaled area (um^2)");
    c.expect_close(hi, 0.064, 1e-12, "largest scaled area (um^2)");
    c.expect_close(scale_rules(sram_reference_rules(1, 1), 1.42).m1_half_pitch, 24.5e-9, 1e-12,
                   "1.42-column half-pitch");

    // gridded bounds bracket exactly (60/40)^2 = 2.25
    for (CellKind k : {CellKind::NWRAM_10T, CellKind::SRAM_8T_HP, CellKind::SRAM_8T_LP}) {
        const CellGeometry g = default_geometry(k);
        c.expect_close(cell_area(g, 60e-9) / cell_area(g, 40e-9), 2.25, 1e-12,
                       std::string(to_string(k)) + " bound ratio");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria gate"};
    int criterion = 0;
    app.add_option("--criterion", criterion, "criterion number 1..6")->required();
    CLI11_PARSE(app, argc, argv);

    const std::map<int, std::pair<const char*, std::function<void(Checker&)>>> criteria = {
        {1, {"device calibration round trip", criterion_device}},
        {2, {"engine oracles", criterion_engine}},
        {3, {"4x4 array functional sweep", criterion_array}},
        {4, {"restore interval properties", criterion_restore}},
        {5, {"benchmark ratio targets", criterion_ratios}},
        {6, {"area pipeline reproduction", criterion_area}},
    };
    auto it = criteria.find(criterion);
    if (it == criteria.end()) {
        std::fprintf(stderr, "unknown criterion %d (expected 1..6)\n", criterion);
        return 2;
    }

    Checker c;
    try {
        it->second.second(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    if (c.ok) {
        std::printf("criterion %d (%s): PASS\n", criterion, it->second.first);
        return 0;
    }
    std::printf("criterion %d (%s): FAIL [%s]\n", criterion, it->second.first,
                c.why.str().c_str());
    return 1;
}
