#pragma once

#include "nwram/netlist.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace nwram {

/// Linear layout rules in meters. The gridded 1-D set uses a uniform
/// interconnect pitch between 40 and 60 nm with a 50 nm contact pitch; the
/// scaled SRAM sets carry half-pitch and spacing entries instead.
struct DesignRules {
    double m1_pitch = 0;
    double m2_pitch = 0;
    double contact_pitch = 0;
    double m1_half_pitch = 0;
    double np_spacing = 0;
    double via_spacing = 0;
};

DesignRules gridded_rules(double pitch);  // throws if pitch outside [40, 60] nm

struct CellGeometry {
    int tracks_x = 1;
    int tracks_y = 1;
};

CellGeometry default_geometry(CellKind kind);

/// Published-node scaling scenario: a 16 nm cell area is the reference area
/// divided by the factor.
struct ScalingScenario {
    double area_factor = 1;
    double rule_factor = 1;
    double ref_area = 0;      // m^2
    std::string ref_node;
};

struct WireModel {
    double sheet_resistance = 1.25;  // ohm/sq
    double cap_per_length = 2e-10;   // F/m (0.2 fF/um)
};

/// One column of the published SRAM scaling data: an area scaling factor, a
/// linear rule scaling factor, and the resulting 16 nm values (three variants
/// per entry, one per published source).
struct SramScalingColumn {
    double area_factor = 1;
    double rule_factor = 1;
    std::array<double, 3> area_um2{};
    std::array<double, 3> m1_half_pitch_nm{};
    std::array<double, 3> np_spacing_nm{};
    std::array<double, 3> via_spacing_nm{};
};

const std::array<SramScalingColumn, 4>& sram_scaling_columns();

/// Reference (pre-scaling) rules of one column/variant, reconstructed from the
/// published 16 nm values and that column's rule factor.
DesignRules sram_reference_rules(int column, int variant);
double sram_reference_area(int column, int variant);  // m^2

double cell_area(const CellGeometry& g, double pitch);        // tracks_x*tracks_y*pitch^2
double scale_area(double ref_area, double factor);            // ref_area / factor
DesignRules scale_rules(const DesignRules& ref, double rule_factor);
std::pair<double, double> extract_wire_rc(double length, double width, const WireModel& m);

/// Bit line run: NWRAM's bit line spans the long (horizontal, M2) dimension,
/// SRAM bit lines the short (vertical, M1) dimension.
double bitline_length(CellKind kind, const CellGeometry& g, const DesignRules& rules);

struct AreaRow {
    std::string cell;
    double low_m2 = 0;
    double high_m2 = 0;
};

/// Lower/upper bound area table: gridded cells over the [40, 60] nm pitch
/// range, 6T cells over the published scaled values.
std::vector<AreaRow> area_report();
std::string area_report_csv();

}  // namespace nwram
