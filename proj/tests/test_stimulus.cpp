#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nwram/stimulus.hpp"

#include <algorithm>

using namespace nwram;

namespace {

const std::vector<std::string> kCellPorts = {"out",     "nout",    "bit0",    "read0",
                                             "w0_pre0", "w0_eva0", "w0_pre1", "w0_eva1"};

ClockScheme default_scheme() {
    return make_clock_scheme(0.4e-9, 80e-12, 20e-12, 10e-12, 1.07, 0.0, 0.8);
}

// Highest level a wave reaches inside [t0, t1].
double peak_in(const Waveform& w, double t0, double t1) {
    double peak = -1e9;
    const int steps = 200;
    for (int i = 0; i <= steps; ++i) peak = std::max(peak, w.sample(t0 + (t1 - t0) * i / steps));
    return peak;
}

}  // namespace

TEST_CASE("waveform sampling interpolates and holds flat outside") {
    Waveform w;
    w.add(1e-9, 0.0);
    w.add(2e-9, 1.0);
    CHECK(w.sample(0.0) == 0.0);
    CHECK(w.sample(1.5e-9) == doctest::Approx(0.5));
    CHECK(w.sample(5e-9) == 1.0);
    CHECK(w.slope(1.5e-9) == doctest::Approx(1.0 / 1e-9));
    CHECK(w.slope(0.5e-9) == 0.0);
    CHECK(w.slope(3e-9) == 0.0);
    CHECK(w.end_time() == doctest::Approx(2e-9));
    CHECK_THROWS_AS(w.add(1.5e-9, 0.3), std::invalid_argument);
}

TEST_CASE("clock scheme validation") {
    // slow variant: 4 ns period, 0.8 ns phases, 0.2 ns gaps
    CHECK_NOTHROW(make_clock_scheme(4e-9, 0.8e-9, 0.2e-9, 0.05e-9, 0.8, 0.0, 0.8));
    // four phases plus gaps must fit in the period
    CHECK_THROWS_AS(make_clock_scheme(0.3e-9, 80e-12, 20e-12, 10e-12, 1.07, 0.0, 0.8),
                    std::invalid_argument);
    // gap of zero would let adjacent phases overlap
    CHECK_THROWS_AS(make_clock_scheme(0.4e-9, 80e-12, 0.0, 10e-12, 1.07, 0.0, 0.8),
                    std::invalid_argument);
    // edges must fit inside the phase
    CHECK_THROWS_AS(make_clock_scheme(0.4e-9, 80e-12, 20e-12, 80e-12, 1.07, 0.0, 0.8),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_clock_scheme(0.4e-9, 80e-12, 20e-12, 10e-12, 0.0, 0.0, 0.8),
                    std::invalid_argument);
}

TEST_CASE("slot and operation timing arithmetic") {
    const ClockScheme s = default_scheme();
    CHECK(slot_start(s, 0, 0) == 0.0);
    CHECK(slot_start(s, 0, 3) == doctest::Approx(3 * 100e-12));
    CHECK(slot_start(s, 1e-9, 1) == doctest::Approx(1e-9 + 100e-12));
    CHECK(write_final_eval_start(s, 0) == doctest::Approx(300e-12));
    CHECK(read_enable_start(s, 0) == doctest::Approx(100e-12));

    CHECK(op_duration(Op::write(1), s) == doctest::Approx(s.period));
    CHECK(op_duration(Op::restore(), s) == doctest::Approx(s.period));
    CHECK(op_duration(Op::read(), s) == doctest::Approx(200e-12));
    CHECK(op_duration(Op::idle(3e-9), s) == doctest::Approx(3e-9));
    CHECK(sequence_duration({Op::write(0), Op::idle(1e-9), Op::restore(), Op::read()}, s) ==
          doctest::Approx(0.4e-9 + 1e-9 + 0.4e-9 + 0.2e-9));
}

TEST_CASE("lowering validates its inputs") {
    const ClockScheme s = default_scheme();
    CHECK_THROWS_AS(lower({}, s, kCellPorts), std::invalid_argument);
    CHECK_THROWS_AS(lower({Op::write(1)}, s, {"bit0", "read0"}), std::invalid_argument);
    CHECK_THROWS_AS(lower({Op::idle(0.0)}, s, kCellPorts), std::invalid_argument);
}

TEST_CASE("write 1 pulses the clocks in forward phase order") {
    const ClockScheme s = default_scheme();
    const auto d = lower({Op::write(1)}, s, kCellPorts);
    // pre0 in slot 0, eva0 in slot 1, pre1 in slot 2, eva1 in slot 3
    const char* names[4] = {"w0_pre0", "w0_eva0", "w0_pre1", "w0_eva1"};
    for (int slot = 0; slot < 4; ++slot) {
        const double t0 = slot_start(s, 0, slot);
        CHECK(peak_in(d.at(names[slot]).wave, t0, t0 + s.phase_width) ==
              doctest::Approx(s.v_high));
    }
    // written 1: bit stays low through the first phase pair, high in the second
    const auto& bit = d.at("bit0").wave;
    CHECK(peak_in(bit, 0, slot_start(s, 0, 1) + s.phase_width - s.rise_fall) ==
          doctest::Approx(0.0));
    CHECK(bit.sample(slot_start(s, 0, 3)) == doctest::Approx(s.v_data));
}

TEST_CASE("write 0 reverses the phase order") {
    const ClockScheme s = default_scheme();
    const auto d = lower({Op::write(0)}, s, kCellPorts);
    // opposite sequence: pre1, eva1, pre0, eva0 across slots 0..3
    const char* names[4] = {"w0_pre1", "w0_eva1", "w0_pre0", "w0_eva0"};
    for (int slot = 0; slot < 4; ++slot) {
        const double t0 = slot_start(s, 0, slot);
        CHECK(peak_in(d.at(names[slot]).wave, t0, t0 + s.phase_width) ==
              doctest::Approx(s.v_high));
    }
}

TEST_CASE("clock phases never overlap") {
    const ClockScheme s = default_scheme();
    for (int bit : {0, 1}) {
        const auto d = lower({Op::write(bit)}, s, kCellPorts);
        const char* clks[4] = {"w0_pre0", "w0_eva0", "w0_pre1", "w0_eva1"};
        const int steps = 400;
        for (int i = 0; i <= steps; ++i) {
            const double t = s.period * i / steps;
            int high = 0;
            for (const char* c : clks)
                if (d.at(c).wave.sample(t) > 0.5 * s.v_high) ++high;
            CHECK(high <= 1);
        }
    }
}

TEST_CASE("read precharges the bit line then floats it") {
    const ClockScheme s = default_scheme();
    const auto d = lower({Op::read()}, s, kCellPorts);
    const auto& bit = d.at("bit0");
    CHECK(bit.wave.sample(s.phase_width) == doctest::Approx(s.v_data));
    CHECK(bit.driven_at(0.5 * s.phase_width));
    CHECK_FALSE(bit.driven_at(s.phase_width + 1e-12));
    CHECK_FALSE(bit.driven_at(2 * (s.phase_width + s.gap) - 1e-12));
    // enable pulse sits in the second slot
    const double t1 = slot_start(s, 0, 1);
    CHECK(peak_in(d.at("read0").wave, t1, t1 + s.phase_width) == doctest::Approx(s.v_high));
    CHECK(peak_in(d.at("read0").wave, 0, t1 - s.gap / 2) == doctest::Approx(0.0));
}

TEST_CASE("idle lowers every control port") {
    const ClockScheme s = default_scheme();
    const auto d = lower({Op::write(1), Op::idle(2e-9)}, s, kCellPorts);
    const double t_idle = s.period + s.rise_fall;
    for (const auto& [name, drive] : d)
        CHECK(drive.wave.sample(t_idle + 1e-9) == doctest::Approx(0.0));
}

TEST_CASE("operations concatenate on the time axis") {
    const ClockScheme s = default_scheme();
    const auto d = lower({Op::write(1), Op::read()}, s, kCellPorts);
    // the read's enable pulse lands one period plus one slot in
    const double t1 = slot_start(s, s.period, 1);
    CHECK(peak_in(d.at("read0").wave, t1, t1 + s.phase_width) == doctest::Approx(s.v_high));
    // every drive is defined from t = 0
    for (const auto& [name, drive] : d) {
        REQUIRE_FALSE(drive.wave.breakpoints.empty());
        CHECK(drive.wave.breakpoints.front().first == 0.0);
    }
}

TEST_CASE("row-level lowering targets one row of an array") {
    const ClockScheme s = default_scheme();
    auto d = empty_array_drives(2, 2);
    d = lower_row_write({1, 1, 2}, s, 1, 0, std::move(d));
    // row 1 clocks pulse, row 0 clocks stay flat low
    const double t3 = slot_start(s, 0, 3);
    CHECK(peak_in(d.at("w1_eva1").wave, t3, t3 + s.phase_width) == doctest::Approx(s.v_high));
    CHECK(peak_in(d.at("w0_eva1").wave, 0, s.period) == doctest::Approx(0.0));
    // non-target column holds its bit high (restore pattern)
    CHECK(d.at("bit0").wave.sample(slot_start(s, 0, 1)) == doctest::Approx(s.v_data));

    d = lower_row_read(0, 2, s, s.period, std::move(d));
    CHECK_FALSE(d.at("bit1").driven_at(s.period + s.phase_width + 1e-12));
}

TEST_CASE("array port naming") {
    CHECK(array_bit_port(3) == "bit3");
    CHECK(array_read_port(2) == "read2");
    CHECK(array_clock_port(1, 0) == "w1_pre0");
    CHECK(array_clock_port(0, 3) == "w0_eva1");
}

TEST_CASE("waveform CSV export") {
    Waveform w;
    w.add(0.0, 0.0);
    w.add(1e-9, 0.8);
    const std::string csv = waveform_csv(w);
    CHECK(csv.find("time_s,volts\n") == 0);
    CHECK(csv.find("0.8") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
