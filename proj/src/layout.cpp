#include "nwram/layout.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace nwram {

DesignRules gridded_rules(double pitch) {
    if (!(pitch >= 40e-9 && pitch <= 60e-9))
        throw std::invalid_argument("gridded pitch must lie in [40 nm, 60 nm]");
    DesignRules r;
    r.m1_pitch = pitch;
    r.m2_pitch = pitch;
    r.contact_pitch = 50e-9;
    r.m1_half_pitch = pitch / 2;
    return r;
}

CellGeometry default_geometry(CellKind kind) {
    switch (kind) {
        case CellKind::NWRAM_10T: return {5, 4};  // 10 crosspoints on a 5-gate x 4-nanowire grid
        case CellKind::SRAM_6T_HP:
        case CellKind::SRAM_6T_LP: return {6, 2};
        case CellKind::SRAM_8T_HP:
        case CellKind::SRAM_8T_LP: return {6, 3};
    }
    return {1, 1};
}

const std::array<SramScalingColumn, 4>& sram_scaling_columns() {
    static const std::array<SramScalingColumn, 4> cols = {{
        {2.45, 1.31,
         {0.028, 0.026, 0.025},
         {32.49, 28.88, 28.88},
         {43.32, 33.7896, 37.544},
         {32.49, 28.88, 28.88}},
        {2.02, 1.42,
         {0.042, 0.038, 0.037},
         {27.5625, 24.5, 24.5},
         {36.75, 28.665, 31.85},
         {27.5625, 24.5, 24.5}},
        {1.75, 1.38,
         {0.056, 0.051, 0.049},
         {29.16, 25.92, 25.92},
         {38.88, 30.3264, 33.696},
         {29.16, 25.92, 25.92}},
        {1.64, 1.31,
         {0.064, 0.058, 0.056},
         {32.49, 28.88, 28.88},
         {43.32, 33.7896, 37.544},
         {32.49, 28.88, 28.88}},
    }};
    return cols;
}

DesignRules sram_reference_rules(int column, int variant) {
    const auto& col = sram_scaling_columns().at(column);
    DesignRules r;
    const double f = col.rule_factor;
    r.m1_half_pitch = col.m1_half_pitch_nm.at(variant) * 1e-9 * f;
    r.np_spacing = col.np_spacing_nm.at(variant) * 1e-9 * f;
    r.via_spacing = col.via_spacing_nm.at(variant) * 1e-9 * f;
    r.m1_pitch = 2 * r.m1_half_pitch;
    return r;
}

double sram_reference_area(int column, int variant) {
    const auto& col = sram_scaling_columns().at(column);
    return col.area_um2.at(variant) * 1e-12 * col.area_factor;
}

double cell_area(const CellGeometry& g, double pitch) {
    if (g.tracks_x < 1 || g.tracks_y < 1)
        throw std::invalid_argument("cell geometry needs at least one track per axis");
    if (!(pitch >= 40e-9 && pitch <= 60e-9))
        throw std::invalid_argument("pitch outside rule bounds [40 nm, 60 nm]");
    return g.tracks_x * g.tracks_y * pitch * pitch;
}

double scale_area(double ref_area, double factor) {
    if (!(ref_area > 0)) throw std::invalid_argument("reference area must be > 0");
    if (!(factor > 1)) throw std::invalid_argument("scaling factor must be > 1");
    return ref_area / factor;
}

DesignRules scale_rules(const DesignRules& ref, double rule_factor) {
    if (!(rule_factor > 1)) throw std::invalid_argument("rule factor must be > 1");
    DesignRules r = ref;
    for (double* dim : {&r.m1_pitch, &r.m2_pitch, &r.contact_pitch, &r.m1_half_pitch,
                        &r.np_spacing, &r.via_spacing})
        *dim /= rule_factor;
    return r;
}

std::pair<double, double> extract_wire_rc(double length, double width, const WireModel& m) {
    if (!(length > 0 && width > 0))
        throw std::invalid_argument("wire dimensions must be > 0");
    return {m.sheet_resistance * length / width, m.cap_per_length * length};
}

double bitline_length(CellKind kind, const CellGeometry& g, const DesignRules& rules) {
    if (kind == CellKind::NWRAM_10T) return g.tracks_x * rules.m2_pitch;
    return g.tracks_y * rules.m1_pitch;
}

std::vector<AreaRow> area_report() {
    std::vector<AreaRow> rows;
    for (CellKind k : {CellKind::NWRAM_10T, CellKind::SRAM_8T_HP, CellKind::SRAM_8T_LP}) {
        const CellGeometry g = default_geometry(k);
        rows.push_back({to_string(k), cell_area(g, 40e-9), cell_area(g, 60e-9)});
    }
    // 6T bounds come straight from the published scaled areas.
    double lo = 1e9, hi = 0;
    for (const auto& col : sram_scaling_columns())
        for (double a : col.area_um2) {
            lo = std::min(lo, a * 1e-12);
            hi = std::max(hi, a * 1e-12);
        }
    rows.push_back({to_string(CellKind::SRAM_6T_HP), lo, hi});
    rows.push_back({to_string(CellKind::SRAM_6T_LP), lo, hi});
    return rows;
}

std::string area_report_csv() {
    std::ostringstream out;
    out.precision(9);
    out << "cell,area_low_um2,area_high_um2\n";
    for (const auto& row : area_report())
        out << row.cell << "," << row.low_m2 * 1e12 << "," << row.high_m2 * 1e12 << "\n";
    return out.str();
}

}  // namespace nwram
