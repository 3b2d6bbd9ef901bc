#pragma once

#include "nwram/device.hpp"
#include "nwram/engine.hpp"
#include "nwram/layout.hpp"
#include "nwram/netlist.hpp"
#include "nwram/stimulus.hpp"

#include <map>
#include <optional>
#include <string>

namespace nwram {

/// Everything the tools need to run, with documented defaults. Loadable from a
/// JSON configuration file (see README for the schema).
struct ToolConfig {
    std::map<DeviceKind, DeviceParams> device_params;       // presets unless overridden
    std::map<DeviceKind, DeviceCaps> device_caps;           // width-scaled defaults
    bool boosted_clocks = true;  // clock high = Vdd + Vth; plain Vdd when false
    double clock_period = 0.4e-9;
    double clock_phase_width = 80e-12;
    double clock_gap = 20e-12;
    double clock_rise_fall = 10e-12;
    SramSizing sizing;
    WireModel wire;
    std::map<CellKind, CellGeometry> geometry;
    double nwram_pitch = 40e-9;   // gridded pitch used for NWRAM parasitics
    double sram8t_pitch = 40e-9;  // gridded pitch used for 8T parasitics
    int sram6t_column = 1;        // published scaling column for 6T rules (0..3)
    int sram6t_variant = 1;       // published variant row (0..2)
    double nwram_read_mult = 1.6;  // width multiplier of the NWRAM read stack
    int column_cells = 16;         // cells loading a bit line in timing/power scenarios
    SimConfig sim;                // t_end filled per scenario
    double leakage_idle = 5e-9;   // s, idle span for leakage measurement
    double restore_tolerance = 0.05;  // relative, retention bisection

    std::map<DeviceKind, CalibratedDevice> devices() const;
    ClockScheme clock_for(CellKind kind) const;   // boosted only for NWRAM
    double vdd_of(CellKind kind) const;
    DesignRules rules_for(CellKind kind) const;
    PortParasitics parasitics_for(CellKind kind) const;
};

ToolConfig default_config();
ToolConfig load_config(const std::string& path);  // defaults + JSON overrides

}  // namespace nwram
