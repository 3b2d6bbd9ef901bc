#pragma once

#include "nwram/config.hpp"
#include "nwram/engine.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nwram {

/// Acceptance levels for measured node voltages.
struct Thresholds {
    double v_high_ok = 0;  // stored/precharged high must stay above this
    double v_low_ok = 0;   // stored low must stay below this
    double sense = 0;      // timing reference crossing

    void check() const;  // v_low_ok < sense < v_high_ok
};

/// rail_driven_high (SRAM storage, driven bit lines) -> 0.9*Vdd. Dynamic
/// N-precharged storage keeps Vdd - Vth - 50 mV even under boosted clocks:
/// evaluation-stack charge sharing, not the precharge threshold drop, bounds
/// the stored high.
Thresholds make_thresholds(double vdd, double vth, bool rail_driven_high);

struct Metrics {
    std::optional<double> write_time;            // s
    std::optional<double> read_time;             // s
    std::optional<double> active_power_read;     // W
    std::optional<double> leakage_power;         // W
    std::optional<double> max_restore_interval;  // s, NWRAM only
    double area_low = 0;                         // m^2
    double area_high = 0;                        // m^2
};

struct Report {
    std::map<CellKind, Metrics> cells;
    std::map<std::string, double> ratios;
    std::vector<std::string> notes;  // measurement conventions, reproducibility
};

struct BenchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Elapsed time from eval_phase_start until the last-settling storage node
/// crosses sense toward its final value and stays beyond it. nullopt when any
/// node fails to settle beyond (v_low_ok, v_high_ok).
std::optional<double> measure_write_time(const TransientResult& r,
                                         const std::vector<std::string>& storage_nodes,
                                         const Thresholds& th, double eval_phase_start);

/// Time from the enable crossing half of enable_v_high to the bit line
/// crossing sense downward (clamped at 0). nullopt when the bit line never
/// crosses -- the correct outcome of a read-1.
std::optional<double> measure_read_time(const TransientResult& r, const std::string& enable_node,
                                        const std::string& bitline_node, const Thresholds& th,
                                        double enable_v_high);

/// supply_energy over [t0, t1] divided by the window, one source or all.
double measure_power(const TransientResult& r, const std::string& source, double t0, double t1);
double measure_power(const TransientResult& r, double t0, double t1);

/// Everything needed to run scenarios on one cell kind. The bit lines carry a
/// column_cells worth of wire and access-device load.
struct CellBench {
    CellKind kind = CellKind::NWRAM_10T;
    Circuit circuit;
    ClockScheme clock;
    Thresholds th;
    double vdd = 0;
};

CellBench make_cell_bench(const ToolConfig& cfg, CellKind kind);

/// Full-level storage initial conditions. Stored 1 <=> out (q) at Vdd.
std::map<std::string, double> stored_init(CellKind kind, double vdd, int bit);

/// One write -> idle(T) -> restore -> read round trip; true when the written
/// bit reads back for both polarities.
bool restore_trial(const ToolConfig& cfg, double idle);

/// Largest idle interval (5% relative, configurable) that restore_trial still
/// survives. Throws BenchError when T = 0 already fails (protocol defect) or
/// no failure is found below 100 us.
double find_max_restore_interval(const ToolConfig& cfg);

/// Write(1) followed by `cycles` back-to-back restore cycles; true when the
/// storage nodes end within thresholds.
bool self_restore_check(const ToolConfig& cfg, int cycles);

struct ArrayCheckResult {
    bool ok = false;
    std::vector<std::string> failures;  // one line per violated cell/bit line
};

/// For every (cell, bit) of a rows x cols array: row write + row read with a
/// checkerboard background; verifies readback and zero disturbance of the
/// other cells' storage nodes.
ArrayCheckResult array_functional_check(const ToolConfig& cfg, int rows, int cols);

/// All metrics of one cell kind. Throws BenchError tagged with the cell and
/// scenario on any simulation failure.
Metrics measure_cell(const ToolConfig& cfg, CellKind kind, bool with_retention = true);

Report run_benchmark(const ToolConfig& cfg,
                     const std::vector<CellKind>& cells = {CellKind::NWRAM_10T,
                                                           CellKind::SRAM_6T_HP,
                                                           CellKind::SRAM_6T_LP,
                                                           CellKind::SRAM_8T_HP,
                                                           CellKind::SRAM_8T_LP});

std::string report_csv(const Report& report);
std::string report_json(const Report& report);

}  // namespace nwram
