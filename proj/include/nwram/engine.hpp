#pragma once

#include "nwram/netlist.hpp"
#include "nwram/stimulus.hpp"

#include <map>
#include <string>
#include <vector>

namespace nwram {

enum class Method { ExplicitSubstep, Trapezoidal };

struct SimConfig {
    double dt_max = 3e-14;           // s
    double t_end = 0;                // s, required
    Method method = Method::Trapezoidal;
    double sample_interval = 5e-13;  // s
    double stability_factor = 0.2;

    void check() const;
};

/// Sampled node voltages plus per-source delivered current. Sources are the
/// rails and every driven port; a floating port delivers zero current.
struct TransientResult {
    std::vector<double> times;
    std::vector<std::string> node_names;
    std::vector<std::vector<double>> voltages;        // [node][sample]
    std::vector<std::string> source_names;
    std::vector<std::vector<double>> source_voltage;  // [source][sample]
    std::vector<std::vector<double>> source_current;  // [source][sample], into the circuit
    std::vector<std::string> flags;

    int node_series(const std::string& name) const;    // throws on unknown
    int source_series(const std::string& name) const;  // throws on unknown
    double at(const std::string& node, double t) const;  // linear interpolation

    /// CSV: time plus one column per requested node (all nodes if empty).
    std::string csv(const std::vector<std::string>& nodes = {}) const;
};

struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Integrates dV/dt = sum(I)/C on every dynamic node with waveform-driven
/// ports and ideal rails. Substeps are bounded by stability_factor * C / G_max
/// with G_max the largest incident small-signal conductance at the operating
/// point. Deterministic for identical inputs. Throws SimulationError on
/// structural invalidity or step underflow (< 1e-18 s).
TransientResult run_transient(const Circuit& c, const std::map<std::string, PortDrive>& stimuli,
                              const std::map<std::string, double>& init, const SimConfig& cfg);

/// Trapezoidal integral of V_source * I_source over [t0, t1] on the sample
/// grid. Throws on unknown source or an empty/out-of-span window.
double supply_energy(const TransientResult& r, const std::string& source, double t0, double t1);

}  // namespace nwram
