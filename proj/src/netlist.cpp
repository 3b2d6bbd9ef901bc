#include "nwram/netlist.hpp"

#include "nwram/stimulus.hpp"

#include <array>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nwram {

const char* to_string(CellKind kind) {
    switch (kind) {
        case CellKind::NWRAM_10T: return "NWRAM_10T";
        case CellKind::SRAM_6T_HP: return "SRAM_6T_HP";
        case CellKind::SRAM_6T_LP: return "SRAM_6T_LP";
        case CellKind::SRAM_8T_HP: return "SRAM_8T_HP";
        case CellKind::SRAM_8T_LP: return "SRAM_8T_LP";
    }
    return "?";
}

CellKind parse_cell_kind(const std::string& name) {
    for (CellKind k : {CellKind::NWRAM_10T, CellKind::SRAM_6T_HP, CellKind::SRAM_6T_LP,
                       CellKind::SRAM_8T_HP, CellKind::SRAM_8T_LP}) {
        if (name == to_string(k)) return k;
    }
    throw std::invalid_argument("unknown cell kind: " + name);
}

bool is_sram(CellKind kind) { return kind != CellKind::NWRAM_10T; }

int Circuit::node_index(const std::string& name) const {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].name == name) return static_cast<int>(i);
    return -1;
}

int Circuit::port(const std::string& name) const {
    auto it = ports.find(name);
    if (it == ports.end()) throw std::invalid_argument("unknown port: " + name);
    return it->second;
}

std::vector<std::string> Circuit::validate() const {
    std::vector<std::string> bad;
    const int n = static_cast<int>(nodes.size());
    auto check_idx = [&](int i, const std::string& what) {
        if (i < 0 || i >= n) bad.push_back("missing node: " + what);
        return i >= 0 && i < n;
    };

    std::vector<int> touches(nodes.size(), 0);
    std::vector<int> resistive(nodes.size(), 0);
    for (size_t i = 0; i < transistors.size(); ++i) {
        const auto& t = transistors[i];
        const std::string tag = "transistor " + std::to_string(i);
        if (check_idx(t.gate, tag + " gate")) ++touches[t.gate];
        if (check_idx(t.drain, tag + " drain")) ++touches[t.drain], ++resistive[t.drain];
        if (check_idx(t.source, tag + " source")) ++touches[t.source], ++resistive[t.source];
        if (devices.find(t.dev) == devices.end())
            bad.push_back(tag + ": no calibrated device for kind " + to_string(t.dev));
    }
    for (size_t i = 0; i < resistors.size(); ++i) {
        const std::string tag = "resistor " + std::to_string(i);
        if (check_idx(resistors[i].a, tag)) ++touches[resistors[i].a], ++resistive[resistors[i].a];
        if (check_idx(resistors[i].b, tag)) ++touches[resistors[i].b], ++resistive[resistors[i].b];
    }
    for (const auto& [name, idx] : ports)
        if (!check_idx(idx, "port " + name)) continue;

    std::set<int> port_nodes;
    for (const auto& [name, idx] : ports)
        if (idx >= 0 && idx < n) port_nodes.insert(idx);

    for (int i = 0; i < n; ++i) {
        if (nodes[i].is_rail) continue;
        if (touches[i] == 0) bad.push_back("dangling node: " + nodes[i].name);
        // A node with channel/resistor connections but no capacitance and no
        // drive has no defined dynamics.
        if (!port_nodes.count(i) && resistive[i] > 0 && !(nodes[i].cap > 0))
            bad.push_back("undefined dynamics (zero capacitance): " + nodes[i].name);
    }
    return bad;
}

std::string Circuit::export_netlist() const {
    std::ostringstream out;
    out.precision(9);
    for (const auto& nd : nodes) {
        if (nd.is_rail)
            out << "V " << nd.name << " " << nd.rail_voltage << "\n";
        else if (nd.cap > 0)
            out << "C " << nd.name << " " << nd.cap << "\n";
    }
    for (const auto& t : transistors)
        out << "M " << to_string(t.dev) << " g=" << nodes[t.gate].name
            << " d=" << nodes[t.drain].name << " s=" << nodes[t.source].name << " w=" << t.width_mult
            << "\n";
    for (const auto& r : resistors)
        out << "R " << nodes[r.a].name << " " << nodes[r.b].name << " " << r.ohms << "\n";
    for (const auto& [name, idx] : ports) out << "P " << name << " " << nodes[idx].name << "\n";
    return out.str();
}

namespace {

struct Builder {
    Circuit c;

    int node(const std::string& name) {
        int i = c.node_index(name);
        if (i >= 0) return i;
        c.nodes.push_back(Node{name, false, 0, 0});
        return static_cast<int>(c.nodes.size() - 1);
    }

    int rail(const std::string& name, double v) {
        int i = node(name);
        c.nodes[i].is_rail = true;
        c.nodes[i].rail_voltage = v;
        return i;
    }

    void fet(DeviceKind dev, int gate, int drain, int source, double mult) {
        c.transistors.push_back(Transistor{dev, gate, drain, source, mult});
        const DeviceCaps caps = c.devices.at(dev).device_caps(mult);
        c.nodes[gate].cap += caps.c_gate;
        c.nodes[drain].cap += caps.c_drain;
        c.nodes[source].cap += caps.c_source;
    }

    void port(const std::string& name, int idx) {
        if (c.ports.count(name)) throw std::invalid_argument("duplicate port: " + name);
        c.ports[name] = idx;
    }

    void wire(const std::string& port_name, const PortParasitics& par) {
        auto itc = par.cap.find(port_name);
        auto itr = par.res.find(port_name);
        if (itc != par.cap.end() && itc->second < 0)
            throw std::invalid_argument("negative wire capacitance on " + port_name);
        if (itr != par.res.end() && itr->second < 0)
            throw std::invalid_argument("negative wire resistance on " + port_name);
        const int idx = c.ports.at(port_name);
        const double cap = itc != par.cap.end() ? itc->second : 0.0;
        if (itr != par.res.end() && itr->second > 0) {
            // Wire RC modeled as a tail load hanging off the net.
            const int tail = node(port_name + "_rc");
            c.resistors.push_back(Resistor{idx, tail, itr->second});
            c.nodes[tail].cap += cap > 0 ? cap : 1e-18;
        } else {
            c.nodes[idx].cap += cap;
        }
    }
};

// Two cross-coupled dynamic NAND gates plus the two-transistor read path.
// The device gated by the opposite output sits nearest the output so the
// stored high is isolated from the stack once the opposite node falls; the
// clocked foot sits nearest VSS.
void add_nwram_cell(Builder& b, const std::string& prefix, int vdd, int vss, int bit, int read,
                    const int clk[4], double read_mult, int& out, int& nout) {
    const DeviceKind D = DeviceKind::XNWFET_2C;
    out = b.node(prefix + "out");
    nout = b.node(prefix + "nout");
    const int half_out[2] = {out, nout};
    for (int h = 0; h < 2; ++h) {
        const int o = half_out[h];
        const int opp = half_out[1 - h];
        const int pre = clk[h == 0 ? 0 : 2];
        const int eva = clk[h == 0 ? 1 : 3];
        const std::string hp = prefix + (h == 0 ? "o_" : "n_");
        const int m = b.node(hp + "stk");
        const int f = b.node(hp + "ft");
        b.fet(D, pre, vdd, o, 1.0);   // precharge
        b.fet(D, opp, o, m, 1.0);     // evaluation stack
        b.fet(D, bit, m, f, 1.0);
        b.fet(D, eva, f, vss, 1.0);   // clocked foot
    }
    const int r = b.node(prefix + "rd");
    b.fet(D, nout, bit, r, read_mult);  // read path: bit -> nout gate -> read gate -> VSS
    b.fet(D, read, r, vss, read_mult);
}

Circuit build_sram(CellKind kind, const std::map<DeviceKind, CalibratedDevice>& devs,
                   const SramSizing& sizing, const PortParasitics& par) {
    const bool hp = kind == CellKind::SRAM_6T_HP || kind == CellKind::SRAM_8T_HP;
    const bool eight = kind == CellKind::SRAM_8T_HP || kind == CellKind::SRAM_8T_LP;
    const DeviceKind N = hp ? DeviceKind::PTM_HP_N : DeviceKind::PTM_LP_N;
    const DeviceKind P = hp ? DeviceKind::PTM_HP_P : DeviceKind::PTM_LP_P;
    if (!(sizing.pass_mult > 0 && sizing.pulldown_mult > 0 && sizing.pullup_mult > 0))
        throw std::invalid_argument("sram sizing multipliers must be > 0");

    Builder b;
    b.c.devices[N] = devs.at(N);
    b.c.devices[P] = devs.at(P);
    const double vdd_v = devs.at(N).params.vdd_nominal;

    const int vdd = b.rail("VDD", vdd_v);
    const int vss = b.rail("VSS", 0.0);
    const int q = b.node("q");
    const int nq = b.node("nq");
    const int wl = b.node("wl");
    const int bl = b.node("bit0");
    const int nbl = b.node("nbit0");

    b.fet(P, nq, vdd, q, sizing.pullup_mult);
    b.fet(N, nq, q, vss, sizing.pulldown_mult);
    b.fet(P, q, vdd, nq, sizing.pullup_mult);
    b.fet(N, q, nq, vss, sizing.pulldown_mult);
    b.fet(N, wl, bl, q, sizing.pass_mult);
    b.fet(N, wl, nbl, nq, sizing.pass_mult);

    b.port("q", q);
    b.port("nq", nq);
    b.port("wl", wl);
    b.port("bit0", bl);
    b.port("nbit0", nbl);

    if (eight) {
        const int rwl = b.node("rwl");
        const int rbl = b.node("rbl");
        const int rint = b.node("rd");
        b.fet(N, rwl, rbl, rint, sizing.pass_mult);
        b.fet(N, nq, rint, vss, sizing.pulldown_mult);
        b.port("rwl", rwl);
        b.port("rbl", rbl);
    }
    for (const auto& [name, idx] : b.c.ports) b.wire(name, par);
    return std::move(b.c);
}

}  // namespace

Circuit build_cell(CellKind kind, const std::map<DeviceKind, CalibratedDevice>& devs,
                   const SramSizing& sizing, const PortParasitics& parasitics, double read_mult) {
    if (is_sram(kind)) return build_sram(kind, devs, sizing, parasitics);
    if (!(read_mult > 0)) throw std::invalid_argument("read stack width multiplier must be > 0");

    Builder b;
    b.c.devices[DeviceKind::XNWFET_2C] = devs.at(DeviceKind::XNWFET_2C);
    const double vdd_v = devs.at(DeviceKind::XNWFET_2C).params.vdd_nominal;
    const int vdd = b.rail("VDD", vdd_v);
    const int vss = b.rail("VSS", 0.0);
    const int bit = b.node("bit0");
    const int read = b.node("read0");
    int clk[4];
    for (int k = 0; k < 4; ++k) clk[k] = b.node(array_clock_port(0, k));

    int out = -1, nout = -1;
    add_nwram_cell(b, "", vdd, vss, bit, read, clk, read_mult, out, nout);

    b.port("out", out);
    b.port("nout", nout);
    b.port("bit0", bit);
    b.port("read0", read);
    for (int k = 0; k < 4; ++k) b.port(array_clock_port(0, k), clk[k]);
    for (const auto& [name, idx] : b.c.ports) b.wire(name, parasitics);
    return std::move(b.c);
}

Circuit build_nwram_array(int rows, int cols, const std::map<DeviceKind, CalibratedDevice>& devs,
                          const PortParasitics& per_cell, double read_mult) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("array dimensions must be at least 1x1");

    Builder b;
    b.c.devices[DeviceKind::XNWFET_2C] = devs.at(DeviceKind::XNWFET_2C);
    const double vdd_v = devs.at(DeviceKind::XNWFET_2C).params.vdd_nominal;
    const int vdd = b.rail("VDD", vdd_v);
    const int vss = b.rail("VSS", 0.0);

    std::vector<int> bits(cols), reads(rows);
    std::vector<std::array<int, 4>> clks(rows);
    for (int c = 0; c < cols; ++c) {
        bits[c] = b.node("bit" + std::to_string(c));
        b.port("bit" + std::to_string(c), bits[c]);
    }
    for (int r = 0; r < rows; ++r) {
        reads[r] = b.node("read" + std::to_string(r));
        b.port("read" + std::to_string(r), reads[r]);
        for (int k = 0; k < 4; ++k) {
            clks[r][k] = b.node(array_clock_port(r, k));
            b.port(array_clock_port(r, k), clks[r][k]);
        }
    }

    auto cap_of = [&](const std::string& key) {
        auto it = per_cell.cap.find(key);
        return it != per_cell.cap.end() ? it->second : 0.0;
    };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const std::string prefix = "c" + std::to_string(r) + "_" + std::to_string(c) + "_";
            int out = -1, nout = -1;
            const int clk_arr[4] = {clks[r][0], clks[r][1], clks[r][2], clks[r][3]};
            add_nwram_cell(b, prefix, vdd, vss, bits[c], reads[r], clk_arr, read_mult, out, nout);
            b.port(prefix + "out", out);
            b.port(prefix + "nout", nout);
            // per-cell share of the column/row wires
            b.c.nodes[bits[c]].cap += cap_of("bit0");
            b.c.nodes[reads[r]].cap += cap_of("read0");
            b.c.nodes[out].cap += cap_of("out");
            b.c.nodes[nout].cap += cap_of("nout");
            for (int k = 0; k < 4; ++k) b.c.nodes[clks[r][k]].cap += cap_of(array_clock_port(0, k));
        }
    }
    return std::move(b.c);
}

}  // namespace nwram
