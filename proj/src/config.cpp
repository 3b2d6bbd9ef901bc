#include "nwram/config.hpp"

#include <fstream>
#include <json.hpp>

namespace nwram {

using nlohmann::json;

std::map<DeviceKind, CalibratedDevice> ToolConfig::devices() const {
    std::map<DeviceKind, CalibratedDevice> lib;
    for (const auto& [kind, params] : device_params) {
        auto itc = device_caps.find(kind);
        lib.emplace(kind, itc != device_caps.end() ? calibrate(params, itc->second)
                                                   : calibrate(params));
    }
    return lib;
}

double ToolConfig::vdd_of(CellKind kind) const {
    switch (kind) {
        case CellKind::NWRAM_10T: return device_params.at(DeviceKind::XNWFET_2C).vdd_nominal;
        case CellKind::SRAM_6T_HP:
        case CellKind::SRAM_8T_HP: return device_params.at(DeviceKind::PTM_HP_N).vdd_nominal;
        case CellKind::SRAM_6T_LP:
        case CellKind::SRAM_8T_LP: return device_params.at(DeviceKind::PTM_LP_N).vdd_nominal;
    }
    return 0;
}

ClockScheme ToolConfig::clock_for(CellKind kind) const {
    const double vdd = vdd_of(kind);
    double v_high = vdd;
    if (kind == CellKind::NWRAM_10T && boosted_clocks)
        v_high = vdd + device_params.at(DeviceKind::XNWFET_2C).vth;
    return make_clock_scheme(clock_period, clock_phase_width, clock_gap, clock_rise_fall, v_high,
                             0.0, vdd);
}

DesignRules ToolConfig::rules_for(CellKind kind) const {
    switch (kind) {
        case CellKind::NWRAM_10T: return gridded_rules(nwram_pitch);
        case CellKind::SRAM_8T_HP:
        case CellKind::SRAM_8T_LP: return gridded_rules(sram8t_pitch);
        default:
            return scale_rules(sram_reference_rules(sram6t_column, sram6t_variant),
                               sram_scaling_columns().at(sram6t_column).rule_factor);
    }
}

PortParasitics ToolConfig::parasitics_for(CellKind kind) const {
    const CellGeometry g = geometry.at(kind);
    const DesignRules rules = rules_for(kind);
    const double bl_cap = wire.cap_per_length * bitline_length(kind, g, rules);
    PortParasitics par;
    if (kind == CellKind::NWRAM_10T) {
        par.cap["bit0"] = bl_cap;
        par.cap["read0"] = bl_cap;  // read line runs the same horizontal span
        const double clk_cap = wire.cap_per_length * g.tracks_y * rules.m1_pitch;
        for (int k = 0; k < 4; ++k) par.cap[array_clock_port(0, k)] = clk_cap;
        // storage nets span the short cell dimension
        par.cap["out"] = clk_cap;
        par.cap["nout"] = clk_cap;
    } else {
        par.cap["bit0"] = bl_cap;
        par.cap["nbit0"] = bl_cap;
        const double wl_cap = wire.cap_per_length * g.tracks_x * rules.m1_pitch;
        par.cap["wl"] = wl_cap;
        if (kind == CellKind::SRAM_8T_HP || kind == CellKind::SRAM_8T_LP) {
            par.cap["rbl"] = bl_cap;
            par.cap["rwl"] = wl_cap;
        }
    }
    return par;
}

ToolConfig default_config() {
    ToolConfig cfg;
    for (DeviceKind k : {DeviceKind::XNWFET_2C, DeviceKind::PTM_HP_N, DeviceKind::PTM_LP_N,
                         DeviceKind::PTM_HP_P, DeviceKind::PTM_LP_P}) {
        cfg.device_params[k] = device_preset(k);
        cfg.device_caps[k] = default_caps(cfg.device_params[k]);
    }
    for (CellKind k : {CellKind::NWRAM_10T, CellKind::SRAM_6T_HP, CellKind::SRAM_6T_LP,
                       CellKind::SRAM_8T_HP, CellKind::SRAM_8T_LP})
        cfg.geometry[k] = default_geometry(k);
    return cfg;
}

namespace {

void merge_device(DeviceParams& p, DeviceCaps& caps, const json& j) {
    if (j.contains("ion")) p.ion = j["ion"];
    if (j.contains("ioff")) p.ioff = j["ioff"];
    if (j.contains("vdd")) p.vdd_nominal = j["vdd"];
    if (j.contains("vth")) p.vth = j["vth"];
    if (j.contains("length")) p.length = j["length"];
    if (j.contains("width")) {
        p.width = j["width"];
        caps = default_caps(p);
    }
    if (j.contains("c_gate")) caps.c_gate = j["c_gate"];
    if (j.contains("c_drain")) caps.c_drain = j["c_drain"];
    if (j.contains("c_source")) caps.c_source = j["c_source"];
}

}  // namespace

ToolConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j = json::parse(in);

    ToolConfig cfg = default_config();
    if (j.contains("devices"))
        for (auto& [name, dj] : j["devices"].items()) {
            const DeviceKind k = parse_device_kind(name);
            merge_device(cfg.device_params[k], cfg.device_caps[k], dj);
        }
    if (j.contains("clock")) {
        const auto& c = j["clock"];
        if (c.contains("period")) cfg.clock_period = c["period"];
        if (c.contains("phase_width")) cfg.clock_phase_width = c["phase_width"];
        if (c.contains("gap")) cfg.clock_gap = c["gap"];
        if (c.contains("rise_fall")) cfg.clock_rise_fall = c["rise_fall"];
        if (c.contains("boost")) cfg.boosted_clocks = c["boost"];
    }
    if (j.contains("sizing")) {
        const auto& s = j["sizing"];
        if (s.contains("pass")) cfg.sizing.pass_mult = s["pass"];
        if (s.contains("pulldown")) cfg.sizing.pulldown_mult = s["pulldown"];
        if (s.contains("pullup")) cfg.sizing.pullup_mult = s["pullup"];
        if (s.contains("nwram_read")) cfg.nwram_read_mult = s["nwram_read"];
    }
    if (j.contains("wire")) {
        const auto& w = j["wire"];
        if (w.contains("sheet_resistance")) cfg.wire.sheet_resistance = w["sheet_resistance"];
        if (w.contains("cap_per_length")) cfg.wire.cap_per_length = w["cap_per_length"];
    }
    if (j.contains("geometry"))
        for (auto& [name, gj] : j["geometry"].items()) {
            CellGeometry g{gj.at(0), gj.at(1)};
            cfg.geometry[parse_cell_kind(name)] = g;
        }
    if (j.contains("layout")) {
        const auto& l = j["layout"];
        if (l.contains("nwram_pitch")) cfg.nwram_pitch = l["nwram_pitch"];
        if (l.contains("sram8t_pitch")) cfg.sram8t_pitch = l["sram8t_pitch"];
        if (l.contains("sram6t_column")) cfg.sram6t_column = l["sram6t_column"];
        if (l.contains("sram6t_variant")) cfg.sram6t_variant = l["sram6t_variant"];
        if (l.contains("column_cells")) cfg.column_cells = l["column_cells"];
    }
    if (j.contains("sim")) {
        const auto& s = j["sim"];
        if (s.contains("dt_max")) cfg.sim.dt_max = s["dt_max"];
        if (s.contains("sample_interval")) cfg.sim.sample_interval = s["sample_interval"];
        if (s.contains("stability_factor")) cfg.sim.stability_factor = s["stability_factor"];
        if (s.contains("method")) {
            const std::string m = s["method"];
            if (m == "explicit") cfg.sim.method = Method::ExplicitSubstep;
            else if (m == "trapezoidal") cfg.sim.method = Method::Trapezoidal;
            else throw std::runtime_error("config: unknown method " + m);
        }
    }
    if (j.contains("bench")) {
        const auto& b = j["bench"];
        if (b.contains("leakage_idle")) cfg.leakage_idle = b["leakage_idle"];
        if (b.contains("restore_tolerance")) cfg.restore_tolerance = b["restore_tolerance"];
    }
    return cfg;
}

}  // namespace nwram
