#include "nwram/device.hpp"

#include <cmath>
#include <sstream>

namespace nwram {

const char* to_string(DeviceKind kind) {
    switch (kind) {
        case DeviceKind::XNWFET_2C: return "XNWFET_2C";
        case DeviceKind::PTM_HP_N: return "PTM_HP_N";
        case DeviceKind::PTM_LP_N: return "PTM_LP_N";
        case DeviceKind::PTM_HP_P: return "PTM_HP_P";
        case DeviceKind::PTM_LP_P: return "PTM_LP_P";
    }
    return "?";
}

DeviceKind parse_device_kind(const std::string& name) {
    for (DeviceKind k : {DeviceKind::XNWFET_2C, DeviceKind::PTM_HP_N, DeviceKind::PTM_LP_N,
                         DeviceKind::PTM_HP_P, DeviceKind::PTM_LP_P}) {
        if (name == to_string(k)) return k;
    }
    throw std::invalid_argument("unknown device kind: " + name);
}

bool is_ptype(DeviceKind kind) {
    return kind == DeviceKind::PTM_HP_P || kind == DeviceKind::PTM_LP_P;
}

void DeviceParams::check() const {
    if (!(ion > ioff && ioff > 0))
        throw std::invalid_argument("device params: require ion > ioff > 0");
    if (!(vth > 0 && vth < vdd_nominal))
        throw std::invalid_argument("device params: require 0 < vth < vdd_nominal");
    if (!(length > 0 && width > 0))
        throw std::invalid_argument("device params: require length, width > 0");
}

DeviceParams device_preset(DeviceKind kind) {
    DeviceParams p;
    p.kind = kind;
    switch (kind) {
        case DeviceKind::XNWFET_2C:
            p.ion = 4.08e-5; p.ioff = 1.56e-9; p.vdd_nominal = 0.8; p.vth = 0.27;
            p.length = 16e-9; p.width = 16e-9;
            break;
        case DeviceKind::PTM_HP_N:
            p.ion = 3.68e-5; p.ioff = 1.05e-8; p.vdd_nominal = 0.7; p.vth = 0.47;
            p.length = 16e-9; p.width = 32e-9;
            break;
        case DeviceKind::PTM_LP_N:
            p.ion = 1.47e-5; p.ioff = 1.99e-12; p.vdd_nominal = 0.9; p.vth = 0.68;
            p.length = 16e-9; p.width = 32e-9;
            break;
        case DeviceKind::PTM_HP_P:
            p = device_preset(DeviceKind::PTM_HP_N);
            p.kind = kind;
            p.ion *= 0.5;
            break;
        case DeviceKind::PTM_LP_P:
            p = device_preset(DeviceKind::PTM_LP_N);
            p.kind = kind;
            p.ion *= 0.5;
            break;
    }
    return p;
}

DeviceCaps default_caps(const DeviceParams& p) {
    const double scale = p.width / 16e-9;
    // The gate-all-around nanowire crosspoint is far lighter than the planar
    // bulk devices behind the PTM cards.
    if (p.kind == DeviceKind::XNWFET_2C)
        return DeviceCaps{0.02e-15 * scale, 0.005e-15 * scale, 0.005e-15 * scale};
    return DeviceCaps{0.05e-15 * scale, 0.01e-15 * scale, 0.01e-15 * scale};
}

namespace {

double softplus(double x) {
    if (x > 40.0) return x;
    if (x < -40.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

double overdrive(double vgs, double vth, double n, double phi_t, bool ideal) {
    if (ideal) return std::max(0.0, vgs - vth);
    const double s = n * phi_t;
    return s * softplus((vgs - vth) / s);
}

double channel_current(double vgs, double vds, double k, double vth, double n, double phi_t,
                       bool ideal) {
    // vds >= 0
    const double vov = overdrive(vgs, vth, n, phi_t, ideal);
    if (vds < vov) return k * (vov * vds - 0.5 * vds * vds);
    return 0.5 * k * vov * vov;
}

}  // namespace

double CalibratedDevice::nchannel(double vgs, double vds) const {
    return channel_current(vgs, vds, k, params.vth, n, thermal_voltage, ideal_switch);
}

double CalibratedDevice::nmodel(double vg, double vd, double vs) const {
    if (vd >= vs) return nchannel(vg - vs, vd - vs);
    return -nchannel(vg - vd, vs - vd);
}

double CalibratedDevice::drain_current(double vg, double vd, double vs, double width_mult) const {
    if (is_ptype(params.kind)) {
        const double m = params.vdd_nominal;
        return -width_mult * nmodel(m - vg, m - vd, m - vs);
    }
    return width_mult * nmodel(vg, vd, vs);
}

void CalibratedDevice::current_and_conductance(double vg, double vd, double vs, double width_mult,
                                               double& i, double& gd, double& gs) const {
    constexpr double h = 1e-3;
    i = drain_current(vg, vd, vs, width_mult);
    gd = (drain_current(vg, vd + h, vs, width_mult) - drain_current(vg, vd - h, vs, width_mult)) /
         (2 * h);
    gs = (drain_current(vg, vd, vs + h, width_mult) - drain_current(vg, vd, vs - h, width_mult)) /
         (2 * h);
}

DeviceCaps CalibratedDevice::device_caps(double width_mult) const {
    return DeviceCaps{base_caps.c_gate * width_mult, base_caps.c_drain * width_mult,
                      base_caps.c_source * width_mult};
}

CalibratedDevice calibrate(const DeviceParams& params, const DeviceCaps& caps) {
    params.check();
    const double phi_t = 0.02585;
    const double vdd = params.vdd_nominal;

    // k chosen so the model hits ion at (vdd, vdd); residual checks ioff at (0, vdd).
    auto fit_k = [&](double n) {
        return params.ion / channel_current(vdd, vdd, 1.0, params.vth, n, phi_t, false);
    };
    auto off_residual = [&](double n) {
        const double kk = fit_k(n);
        return channel_current(0.0, vdd, kk, params.vth, n, phi_t, false) - params.ioff;
    };

    double lo = 1.0, hi = 10.0;
    double flo = off_residual(lo), fhi = off_residual(hi);
    if (flo > 0 || fhi < 0) {
        std::ostringstream msg;
        msg << "calibration for " << to_string(params.kind)
            << ": cannot bracket subthreshold ideality in [1, 10]";
        throw CalibrationError(msg.str());
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-9 * lo; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (off_residual(mid) <= 0) lo = mid; else hi = mid;
    }

    CalibratedDevice dev;
    dev.params = params;
    dev.n = 0.5 * (lo + hi);
    dev.k = fit_k(dev.n);
    dev.thermal_voltage = phi_t;
    dev.base_caps = caps;

    const double i_on = is_ptype(params.kind) ? -dev.drain_current(0.0, 0.0, vdd)
                                              : dev.drain_current(vdd, vdd, 0.0);
    if (std::abs(i_on - params.ion) / params.ion > 1e-3)
        throw CalibrationError(std::string("calibration failed on-current check for ") +
                               to_string(params.kind));
    return dev;
}

CalibratedDevice calibrate(const DeviceParams& params) {
    return calibrate(params, default_caps(params));
}

std::map<DeviceKind, CalibratedDevice> device_library() {
    std::map<DeviceKind, CalibratedDevice> lib;
    for (DeviceKind k : {DeviceKind::XNWFET_2C, DeviceKind::PTM_HP_N, DeviceKind::PTM_LP_N,
                         DeviceKind::PTM_HP_P, DeviceKind::PTM_LP_P}) {
        lib.emplace(k, calibrate(device_preset(k)));
    }
    return lib;
}

}  // namespace nwram
