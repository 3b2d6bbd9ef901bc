#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nwram {

/// Piecewise-linear waveform: linear between breakpoints, held flat before the
/// first and after the last one.
struct Waveform {
    std::vector<std::pair<double, double>> breakpoints;  // (time s, volts), times strictly increasing

    double sample(double t) const;
    double slope(double t) const;  // V/s of the containing segment, 0 outside
    void add(double t, double v);  // throws if t not past the last breakpoint
    double end_time() const { return breakpoints.empty() ? 0.0 : breakpoints.back().first; }
};

/// A drive for one port. Inside a float window the driver is disconnected and
/// the node integrates freely from whatever voltage it had at release.
struct PortDrive {
    Waveform wave;
    std::vector<std::pair<double, double>> float_windows;  // [t0, t1) intervals, sorted

    bool driven_at(double t) const;
};

/// Timing of one full pre0/eva0/pre1/eva1 cycle. Phase slots are laid out back
/// to back, each phase_width long and separated by gap; rise_fall edges live
/// inside the slot.
struct ClockScheme {
    double period = 0.4e-9;
    double phase_width = 80e-12;
    double gap = 20e-12;
    double rise_fall = 10e-12;
    double v_high = 1.07;  // boosted Vdd + Vth by default; see docs
    double v_low = 0.0;
    double v_data = 0.8;   // bit line drive level (Vdd)
};

/// Validates the non-overlap invariants. Throws std::invalid_argument on
/// 4*(phase_width + gap) > period, gap <= 0 or rise_fall >= phase_width.
ClockScheme make_clock_scheme(double period, double phase_width, double gap, double rise_fall,
                              double v_high, double v_low, double v_data);

double slot_start(const ClockScheme& s, double op_start, int slot);  // slot 0..3

enum class OpKind { Write, Read, Restore, Idle };

struct Op {
    OpKind kind = OpKind::Idle;
    int bit = 0;          // Write only
    double duration = 0;  // Idle only, seconds

    static Op write(int bit) { return {OpKind::Write, bit, 0}; }
    static Op read() { return {OpKind::Read, 0, 0}; }
    static Op restore() { return {OpKind::Restore, 0, 0}; }
    static Op idle(double d) { return {OpKind::Idle, 0, d}; }
};

using OperationSequence = std::vector<Op>;

double op_duration(const Op& op, const ClockScheme& s);
double sequence_duration(const OperationSequence& seq, const ClockScheme& s);

/// Start time of the evaluate slot that causes the final storage transition of
/// a Write op beginning at op_start (slot 3 in both phase orders).
double write_final_eval_start(const ClockScheme& s, double op_start);

/// Time at which read_0 starts rising within a Read op beginning at op_start.
double read_enable_start(const ClockScheme& s, double op_start);

/// Lower a single-cell protocol sequence to per-port drives. Required port
/// names: bit, read and the four clock nets. Throws on an empty sequence or a
/// missing required port.
std::map<std::string, PortDrive> lower(const OperationSequence& seq, const ClockScheme& scheme,
                                       const std::vector<std::string>& ports);

/// Per-column bit pattern for one row-wide write: the target column carries the
/// written value, every other column carries the hold (restore) pattern so its
/// cell rewrites its own value. Used by the array scenarios.
struct RowWritePlan {
    int target_col = 0;
    int bit = 0;
    int cols = 1;
};

/// All control ports of a rows x cols array, each held at v_low until an op
/// touches it. Pass as `into` when composing row-level ops.
std::map<std::string, PortDrive> empty_array_drives(int rows, int cols);

std::map<std::string, PortDrive> lower_row_write(const RowWritePlan& plan, const ClockScheme& scheme,
                                                 int row, double op_start,
                                                 std::map<std::string, PortDrive> into = {});

/// Row-wide read: precharge + release every bit column, pulse read_{row}.
std::map<std::string, PortDrive> lower_row_read(int row, int cols, const ClockScheme& scheme,
                                                double op_start,
                                                std::map<std::string, PortDrive> into = {});

std::string array_bit_port(int col);
std::string array_read_port(int row);
std::string array_clock_port(int row, int slot_kind);  // 0 pre0, 1 eva0, 2 pre1, 3 eva1

/// Export one waveform as two-column CSV (time_s, volts).
std::string waveform_csv(const Waveform& w);

}  // namespace nwram
