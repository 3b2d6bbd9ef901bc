#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace nwram {

enum class DeviceKind {
    XNWFET_2C,
    PTM_HP_N,
    PTM_LP_N,
    PTM_HP_P,
    PTM_LP_P,
};

const char* to_string(DeviceKind kind);
DeviceKind parse_device_kind(const std::string& name);
bool is_ptype(DeviceKind kind);

/// Terminal-level FET description. Currents are magnitudes at nominal bias:
/// ion at |Vgs| = |Vds| = vdd_nominal, ioff at Vgs = 0, |Vds| = vdd_nominal.
struct DeviceParams {
    DeviceKind kind = DeviceKind::XNWFET_2C;
    double ion = 0;          // A
    double ioff = 0;         // A
    double vdd_nominal = 0;  // V
    double vth = 0;          // V
    double length = 0;       // m
    double width = 0;        // m

    void check() const;  // throws std::invalid_argument on violation
};

/// Built-in presets for the five supported kinds. P-type presets mirror the
/// corresponding N-type with ion scaled by 0.5 (mobility ratio ~2) and ioff
/// unchanged.
DeviceParams device_preset(DeviceKind kind);

/// Per-terminal lumped capacitances of a unit-width device.
struct DeviceCaps {
    double c_gate = 0;    // F
    double c_drain = 0;   // F
    double c_source = 0;  // F
};

/// Default caps scale with the drawn width. Per 16 nm of width: 0.05 fF gate
/// and 0.01 fF junction (drain/source) for the planar model cards, 0.02 fF /
/// 0.005 fF for the nanowire crosspoint device.
DeviceCaps default_caps(const DeviceParams& p);

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Smoothed square-law model with two fitted coefficients.
///
/// Effective overdrive Vov = n*phi_t*ln(1 + exp((Vgs - Vth)/(n*phi_t))),
/// current k*(Vov*Vds - Vds^2/2) in triode, k/2*Vov^2 in saturation. The pair
/// (k, n) is fitted so the model hits the preset (ion, ioff) endpoints.
/// Immutable after calibration; evaluation is pure.
struct CalibratedDevice {
    DeviceParams params;
    double k = 0;                      // A/V^2
    double n = 1;                      // subthreshold ideality
    double thermal_voltage = 0.02585;  // V, 300 K
    DeviceCaps base_caps;              // per unit-width-multiplier caps
    bool ideal_switch = false;         // test idealization: zero off current

    /// Signed current, positive drain -> source. Antisymmetric under
    /// drain/source exchange; P-type kinds evaluate via voltage mirroring
    /// about vdd_nominal.
    double drain_current(double vg, double vd, double vs, double width_mult = 1.0) const;

    /// Current plus finite-difference (+-1 mV) conductances w.r.t. vd and vs.
    void current_and_conductance(double vg, double vd, double vs, double width_mult,
                                 double& i, double& gd, double& gs) const;

    DeviceCaps device_caps(double width_mult = 1.0) const;

  private:
    double nchannel(double vgs, double vds) const;  // vds >= 0
    double nmodel(double vg, double vd, double vs) const;
};

/// Fit (k, n): k eliminated through the ion equation, then bisection on
/// n in [1, 10] against the ioff equation, 1e-6 relative tolerance.
/// Throws CalibrationError if ioff >= ion or the root cannot be bracketed.
CalibratedDevice calibrate(const DeviceParams& params);
CalibratedDevice calibrate(const DeviceParams& params, const DeviceCaps& caps);

/// All five presets calibrated, keyed by kind.
std::map<DeviceKind, CalibratedDevice> device_library();

}  // namespace nwram
