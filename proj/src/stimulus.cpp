#include "nwram/stimulus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nwram {

double Waveform::sample(double t) const {
    if (breakpoints.empty()) return 0.0;
    if (t <= breakpoints.front().first) return breakpoints.front().second;
    if (t >= breakpoints.back().first) return breakpoints.back().second;
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t,
                               [](double tt, const auto& bp) { return tt < bp.first; });
    const auto& [t1, v1] = *it;
    const auto& [t0, v0] = *std::prev(it);
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

double Waveform::slope(double t) const {
    if (breakpoints.size() < 2) return 0.0;
    if (t <= breakpoints.front().first || t >= breakpoints.back().first) return 0.0;
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t,
                               [](double tt, const auto& bp) { return tt < bp.first; });
    const auto& [t1, v1] = *it;
    const auto& [t0, v0] = *std::prev(it);
    return (v1 - v0) / (t1 - t0);
}

void Waveform::add(double t, double v) {
    if (!breakpoints.empty()) {
        const auto& [lt, lv] = breakpoints.back();
        if (t == lt && v == lv) return;
        if (t <= lt) throw std::invalid_argument("waveform breakpoint times must increase");
    }
    breakpoints.emplace_back(t, v);
}

bool PortDrive::driven_at(double t) const {
    for (const auto& [a, b] : float_windows)
        if (t >= a && t < b) return false;
    return true;
}

ClockScheme make_clock_scheme(double period, double phase_width, double gap, double rise_fall,
                              double v_high, double v_low, double v_data) {
    if (gap <= 0) throw std::invalid_argument("clock scheme: gap must be > 0 (non-overlap)");
    if (4 * phase_width + 4 * gap > period)
        throw std::invalid_argument("clock scheme: 4*(phase_width + gap) exceeds period");
    if (!(rise_fall > 0 && rise_fall < phase_width))
        throw std::invalid_argument("clock scheme: rise_fall must be in (0, phase_width)");
    if (!(v_high > v_low)) throw std::invalid_argument("clock scheme: v_high must exceed v_low");
    return ClockScheme{period, phase_width, gap, rise_fall, v_high, v_low, v_data};
}

double slot_start(const ClockScheme& s, double op_start, int slot) {
    return op_start + slot * (s.phase_width + s.gap);
}

double op_duration(const Op& op, const ClockScheme& s) {
    switch (op.kind) {
        case OpKind::Write:
        case OpKind::Restore: return s.period;
        case OpKind::Read: return 2 * (s.phase_width + s.gap);
        case OpKind::Idle: return op.duration;
    }
    return 0;
}

double sequence_duration(const OperationSequence& seq, const ClockScheme& s) {
    double t = 0;
    for (const auto& op : seq) t += op_duration(op, s);
    return t;
}

double write_final_eval_start(const ClockScheme& s, double op_start) {
    return slot_start(s, op_start, 3);
}

double read_enable_start(const ClockScheme& s, double op_start) {
    return slot_start(s, op_start, 1);
}

std::string array_bit_port(int col) { return "bit" + std::to_string(col); }
std::string array_read_port(int row) { return "read" + std::to_string(row); }

std::string array_clock_port(int row, int slot_kind) {
    static const char* suffix[4] = {"pre0", "eva0", "pre1", "eva1"};
    return "w" + std::to_string(row) + "_" + suffix[slot_kind];
}

namespace {

// Ramp a port from whatever level it holds to v, starting at t.
void ramp_to(Waveform& w, double t, double rf, double v) {
    if (w.breakpoints.empty()) {
        w.add(t, v);
        return;
    }
    const double cur = w.breakpoints.back().second;
    if (cur == v) return;
    if (t > w.breakpoints.back().first) w.add(t, cur);
    w.add(t + rf, v);
}

void pulse(Waveform& w, const ClockScheme& s, double t0) {
    if (w.breakpoints.empty() || w.breakpoints.back().first < t0) w.add(t0, s.v_low);
    w.add(t0 + s.rise_fall, s.v_high);
    w.add(t0 + s.phase_width - s.rise_fall, s.v_high);
    w.add(t0 + s.phase_width, s.v_low);
}

enum class ColPattern { Write0, Write1, Hold };

// One full clock cycle on one row; the phase order is reversed when writing
// 0. Every column's bit carries its pattern: the
// written value keeps the bit low over the first phase pair, hold keeps it
// high throughout so the cell re-derives its stored value.
void apply_cycle(std::map<std::string, PortDrive>& drives, const ClockScheme& s, int row, double t,
                 bool reversed, const std::vector<ColPattern>& cols) {
    const int fwd[4] = {0, 1, 2, 3};
    const int rev[4] = {2, 3, 0, 1};
    const int* order = reversed ? rev : fwd;
    for (int slot = 0; slot < 4; ++slot)
        pulse(drives.at(array_clock_port(row, order[slot])).wave, s, slot_start(s, t, slot));

    const double second_pair = slot_start(s, t, 1) + s.phase_width;  // gap before slot 2
    for (size_t c = 0; c < cols.size(); ++c) {
        Waveform& bit = drives.at(array_bit_port(static_cast<int>(c))).wave;
        const double first_level = (cols[c] == ColPattern::Hold) ? s.v_data : s.v_low;
        ramp_to(bit, t, s.rise_fall, first_level);
        ramp_to(bit, second_pair, s.rise_fall, s.v_data);
    }
}

void apply_read(std::map<std::string, PortDrive>& drives, const ClockScheme& s, int row, int cols,
                double t) {
    const double t_end = t + 2 * (s.phase_width + s.gap);
    for (int c = 0; c < cols; ++c) {
        PortDrive& bit = drives.at(array_bit_port(c));
        ramp_to(bit.wave, t, s.rise_fall, s.v_data);  // precharge
        bit.float_windows.emplace_back(t + s.phase_width, t_end);
    }
    pulse(drives.at(array_read_port(row)).wave, s, slot_start(s, t, 1));
}

void apply_idle(std::map<std::string, PortDrive>& drives, const ClockScheme& s, double t) {
    for (auto& [name, d] : drives) ramp_to(d.wave, t, s.rise_fall, s.v_low);
}

std::map<std::string, PortDrive> init_drives(int rows, int cols) {
    std::map<std::string, PortDrive> drives;
    for (int r = 0; r < rows; ++r) {
        drives[array_read_port(r)] = {};
        for (int k = 0; k < 4; ++k) drives[array_clock_port(r, k)] = {};
    }
    for (int c = 0; c < cols; ++c) drives[array_bit_port(c)] = {};
    return drives;
}

void seed_levels(std::map<std::string, PortDrive>& drives, const ClockScheme& s) {
    for (auto& [name, d] : drives)
        if (d.wave.breakpoints.empty() || d.wave.breakpoints.front().first > 0)
            d.wave.breakpoints.insert(d.wave.breakpoints.begin(), {0.0, s.v_low});
}

}  // namespace

std::map<std::string, PortDrive> empty_array_drives(int rows, int cols) {
    return init_drives(rows, cols);
}

std::map<std::string, PortDrive> lower(const OperationSequence& seq, const ClockScheme& scheme,
                                       const std::vector<std::string>& ports) {
    if (seq.empty()) throw std::invalid_argument("lower: empty operation sequence");
    for (const char* req : {"bit0", "read0", "w0_pre0", "w0_eva0", "w0_pre1", "w0_eva1"})
        if (std::find(ports.begin(), ports.end(), req) == ports.end())
            throw std::invalid_argument(std::string("lower: required port missing: ") + req);

    auto drives = init_drives(1, 1);
    double t = 0;
    for (const auto& op : seq) {
        switch (op.kind) {
            case OpKind::Write:
                apply_cycle(drives, scheme, 0, t, op.bit == 0,
                            {op.bit ? ColPattern::Write1 : ColPattern::Write0});
                break;
            case OpKind::Restore:
                apply_cycle(drives, scheme, 0, t, false, {ColPattern::Hold});
                break;
            case OpKind::Read: apply_read(drives, scheme, 0, 1, t); break;
            case OpKind::Idle:
                if (!(op.duration > 0)) throw std::invalid_argument("lower: idle duration <= 0");
                apply_idle(drives, scheme, t);
                break;
        }
        t += op_duration(op, scheme);
    }
    seed_levels(drives, scheme);
    return drives;
}

std::map<std::string, PortDrive> lower_row_write(const RowWritePlan& plan, const ClockScheme& scheme,
                                                 int row, double op_start,
                                                 std::map<std::string, PortDrive> into) {
    if (into.empty()) into = init_drives(row + 1, plan.cols);
    std::vector<ColPattern> cols(plan.cols, ColPattern::Hold);
    cols.at(plan.target_col) = plan.bit ? ColPattern::Write1 : ColPattern::Write0;
    apply_cycle(into, scheme, row, op_start, plan.bit == 0, cols);
    seed_levels(into, scheme);
    return into;
}

std::map<std::string, PortDrive> lower_row_read(int row, int cols, const ClockScheme& scheme,
                                                double op_start,
                                                std::map<std::string, PortDrive> into) {
    if (into.empty()) into = init_drives(row + 1, cols);
    apply_read(into, scheme, row, cols, op_start);
    seed_levels(into, scheme);
    return into;
}

std::string waveform_csv(const Waveform& w) {
    std::ostringstream out;
    out << "time_s,volts\n";
    out.precision(12);
    for (const auto& [t, v] : w.breakpoints) out << t << "," << v << "\n";
    return out.str();
}

}  // namespace nwram
