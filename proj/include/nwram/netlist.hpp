#pragma once

#include "nwram/device.hpp"

#include <map>
#include <string>
#include <vector>

namespace nwram {

enum class CellKind { NWRAM_10T, SRAM_6T_HP, SRAM_6T_LP, SRAM_8T_HP, SRAM_8T_LP };

const char* to_string(CellKind kind);
CellKind parse_cell_kind(const std::string& name);
bool is_sram(CellKind kind);

/// Pass and pull-down transistors sized up relative to the pull-ups.
struct SramSizing {
    double pass_mult = 1.4;
    double pulldown_mult = 1.7;
    double pullup_mult = 1.0;
};

struct Node {
    std::string name;
    bool is_rail = false;
    double rail_voltage = 0;  // V, rails only
    double cap = 0;           // F, lumped (wire + attached device terminals)
};

struct Transistor {
    DeviceKind dev = DeviceKind::XNWFET_2C;
    int gate = -1;
    int drain = -1;
    int source = -1;
    double width_mult = 1.0;
};

struct Resistor {
    int a = -1;
    int b = -1;
    double ohms = 0;
};

/// Extra lumped wire capacitance (F) and optional series resistance (ohms)
/// attached to named port nets.
struct PortParasitics {
    std::map<std::string, double> cap;
    std::map<std::string, double> res;
};

/// Immutable after construction; builders are pure.
struct Circuit {
    std::vector<Node> nodes;
    std::vector<Transistor> transistors;
    std::vector<Resistor> resistors;
    std::map<std::string, int> ports;
    std::map<DeviceKind, CalibratedDevice> devices;

    int node_index(const std::string& name) const;  // -1 if absent
    int port(const std::string& name) const;        // throws on unknown port

    /// Structural diagnostics: dangling terminals, floating nodes with no
    /// capacitance, unconnected nodes. Empty vector means ok.
    std::vector<std::string> validate() const;

    /// One element per line: type, terminals, value.
    std::string export_netlist() const;
};

/// Single memory cell. Port names follow the array convention with row 0 /
/// column 0: out, nout, bit0, read0, w0_pre0, w0_eva0, w0_pre1, w0_eva1 for
/// NWRAM; q, nq, wl, bit0, nbit0 (+ rwl, rbl for 8T) for SRAM.
Circuit build_cell(CellKind kind, const std::map<DeviceKind, CalibratedDevice>& devs,
                   const SramSizing& sizing = {}, const PortParasitics& parasitics = {},
                   double nwram_read_mult = 1.0);

/// rows x cols NWRAM array. Each row shares one clock set and one read line,
/// each column one bit line; per-cell bitline wire capacitance accumulates on
/// the shared bit node. Cell storage nodes are exported as ports c{r}_{c}_out
/// and c{r}_{c}_nout.
Circuit build_nwram_array(int rows, int cols, const std::map<DeviceKind, CalibratedDevice>& devs,
                          const PortParasitics& per_cell_parasitics = {},
                          double nwram_read_mult = 1.0);

}  // namespace nwram
