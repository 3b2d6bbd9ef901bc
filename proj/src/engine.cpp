#include "nwram/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nwram {

void SimConfig::check() const {
    if (!(dt_max > 0 && dt_max <= sample_interval))
        throw SimulationError("sim config: require 0 < dt_max <= sample_interval");
    if (!(t_end > 0)) throw SimulationError("sim config: t_end must be > 0");
    if (!(stability_factor > 0 && stability_factor <= 0.5))
        throw SimulationError("sim config: stability_factor must be in (0, 0.5]");
}

int TransientResult::node_series(const std::string& name) const {
    for (size_t i = 0; i < node_names.size(); ++i)
        if (node_names[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("no such node series: " + name);
}

int TransientResult::source_series(const std::string& name) const {
    for (size_t i = 0; i < source_names.size(); ++i)
        if (source_names[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("no such source series: " + name);
}

double TransientResult::at(const std::string& node, double t) const {
    const auto& v = voltages[node_series(node)];
    if (t <= times.front()) return v.front();
    if (t >= times.back()) return v.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    const size_t j = it - times.begin();
    const double t0 = times[j - 1], t1 = times[j];
    return v[j - 1] + (v[j] - v[j - 1]) * (t - t0) / (t1 - t0);
}

std::string TransientResult::csv(const std::vector<std::string>& nodes) const {
    std::vector<int> cols;
    std::ostringstream out;
    out.precision(9);
    out << "time_s";
    if (nodes.empty()) {
        for (size_t i = 0; i < node_names.size(); ++i) {
            cols.push_back(static_cast<int>(i));
            out << "," << node_names[i];
        }
    } else {
        for (const auto& n : nodes) {
            cols.push_back(node_series(n));
            out << "," << n;
        }
    }
    out << "\n";
    for (size_t s = 0; s < times.size(); ++s) {
        out << times[s];
        for (int c : cols) out << "," << voltages[c][s];
        out << "\n";
    }
    return out.str();
}

namespace {

enum class NodeRole { Rail, Driven, Dynamic };

struct Sim {
    const Circuit& c;
    const SimConfig& cfg;
    std::vector<NodeRole> role;
    std::vector<const PortDrive*> drive;  // per node, Driven only
    std::vector<double> volt, cur, cond;
    std::vector<double> cur2;  // corrector stage
    std::vector<double> boundaries;

    explicit Sim(const Circuit& circuit, const SimConfig& config)
        : c(circuit), cfg(config) {}

    // Signed current into every node plus the incident conductance bound.
    void eval(const std::vector<double>& v, std::vector<double>& i_out,
              std::vector<double>* g_out) {
        std::fill(i_out.begin(), i_out.end(), 0.0);
        if (g_out) std::fill(g_out->begin(), g_out->end(), 0.0);
        for (const auto& t : c.transistors) {
            const auto& dev = c.devices.at(t.dev);
            double i, gd, gs;
            if (g_out) {
                dev.current_and_conductance(v[t.gate], v[t.drain], v[t.source], t.width_mult, i,
                                            gd, gs);
                (*g_out)[t.drain] = std::max((*g_out)[t.drain], std::abs(gd));
                (*g_out)[t.source] = std::max((*g_out)[t.source], std::abs(gs));
            } else {
                i = dev.drain_current(v[t.gate], v[t.drain], v[t.source], t.width_mult);
            }
            i_out[t.drain] -= i;
            i_out[t.source] += i;
        }
        for (const auto& r : c.resistors) {
            const double i = (v[r.a] - v[r.b]) / r.ohms;
            i_out[r.a] -= i;
            i_out[r.b] += i;
            if (g_out) {
                (*g_out)[r.a] = std::max((*g_out)[r.a], 1.0 / r.ohms);
                (*g_out)[r.b] = std::max((*g_out)[r.b], 1.0 / r.ohms);
            }
        }
    }

    bool integrated(int n, double t) const {
        if (role[n] == NodeRole::Dynamic) return true;
        return role[n] == NodeRole::Driven && !drive[n]->driven_at(t);
    }

    double next_boundary(double t) const {
        auto it = std::upper_bound(boundaries.begin(), boundaries.end(), t + 1e-24);
        return it == boundaries.end() ? cfg.t_end : *it;
    }
};

}  // namespace

TransientResult run_transient(const Circuit& c, const std::map<std::string, PortDrive>& stimuli,
                              const std::map<std::string, double>& init, const SimConfig& cfg) {
    cfg.check();
    if (auto bad = c.validate(); !bad.empty())
        throw SimulationError("invalid circuit: " + bad.front());

    const size_t n = c.nodes.size();
    Sim sim(c, cfg);
    sim.role.assign(n, NodeRole::Dynamic);
    sim.drive.assign(n, nullptr);
    sim.volt.assign(n, 0.0);
    sim.cur.assign(n, 0.0);
    sim.cur2.assign(n, 0.0);
    sim.cond.assign(n, 0.0);

    for (size_t i = 0; i < n; ++i) {
        if (c.nodes[i].is_rail) {
            sim.role[i] = NodeRole::Rail;
            sim.volt[i] = c.nodes[i].rail_voltage;
        }
    }
    std::vector<std::pair<std::string, int>> sources;  // name, node
    for (size_t i = 0; i < n; ++i)
        if (c.nodes[i].is_rail) sources.emplace_back(c.nodes[i].name, static_cast<int>(i));
    for (const auto& [port, d] : stimuli) {
        auto it = c.ports.find(port);
        if (it == c.ports.end()) throw SimulationError("stimulus for unknown port: " + port);
        const int idx = it->second;
        if (c.nodes[idx].is_rail) throw SimulationError("cannot drive rail node: " + port);
        sim.role[idx] = NodeRole::Driven;
        sim.drive[idx] = &d;
        sim.volt[idx] = d.wave.sample(0.0);
        sources.emplace_back(port, idx);
        for (const auto& [t, v] : d.wave.breakpoints)
            if (t > 0 && t < cfg.t_end) sim.boundaries.push_back(t);
        for (const auto& [a, b] : d.float_windows) {
            if (a > 0 && a < cfg.t_end) sim.boundaries.push_back(a);
            if (b > 0 && b < cfg.t_end) sim.boundaries.push_back(b);
        }
    }
    std::sort(sim.boundaries.begin(), sim.boundaries.end());
    sim.boundaries.erase(std::unique(sim.boundaries.begin(), sim.boundaries.end()),
                         sim.boundaries.end());

    for (const auto& [name, v] : init) {
        int idx = c.node_index(name);
        if (idx < 0) {
            auto it = c.ports.find(name);
            if (it == c.ports.end()) throw SimulationError("initial condition for unknown node: " + name);
            idx = it->second;
        }
        if (sim.role[idx] == NodeRole::Dynamic) sim.volt[idx] = v;
    }
    for (size_t i = 0; i < n; ++i) {
        if (sim.role[i] == NodeRole::Dynamic && !(c.nodes[i].cap > 0)) {
            bool touched = false;
            for (const auto& t : c.transistors)
                touched |= (t.drain == static_cast<int>(i) || t.source == static_cast<int>(i));
            for (const auto& r : c.resistors)
                touched |= (r.a == static_cast<int>(i) || r.b == static_cast<int>(i));
            if (touched)
                throw SimulationError("dynamic node without capacitance: " + c.nodes[i].name);
        }
    }

    TransientResult res;
    for (const auto& nd : c.nodes) res.node_names.push_back(nd.name);
    res.voltages.assign(n, {});
    for (const auto& [name, idx] : sources) res.source_names.push_back(name);
    res.source_voltage.assign(sources.size(), {});
    res.source_current.assign(sources.size(), {});

    auto record = [&](double t) {
        res.times.push_back(t);
        for (size_t i = 0; i < n; ++i) res.voltages[i].push_back(sim.volt[i]);
        sim.eval(sim.volt, sim.cur, nullptr);
        for (size_t s = 0; s < sources.size(); ++s) {
            const int idx = sources[s].second;
            res.source_voltage[s].push_back(sim.volt[idx]);
            if (sim.role[idx] == NodeRole::Rail) {
                res.source_current[s].push_back(-sim.cur[idx]);
            } else if (sim.drive[idx]->driven_at(t)) {
                // The driver also charges the lumped cap sitting on its own net.
                const double i_self = c.nodes[idx].cap * sim.drive[idx]->wave.slope(t);
                res.source_current[s].push_back(i_self - sim.cur[idx]);
            } else {
                res.source_current[s].push_back(0.0);
            }
        }
    };

    const bool heun = cfg.method == Method::Trapezoidal;
    std::vector<double> pred(n, 0.0);
    bool warned = false;

    double t = 0.0;
    record(t);
    long sample_idx = 1;
    while (t < cfg.t_end - 1e-24) {
        const double t_sample = std::min(cfg.t_end, sample_idx * cfg.sample_interval);
        while (t < t_sample - 1e-24) {
            sim.eval(sim.volt, sim.cur, &sim.cond);
            double dt = cfg.dt_max;
            for (size_t i = 0; i < n; ++i) {
                if (!sim.integrated(static_cast<int>(i), t) || sim.cond[i] <= 0) continue;
                dt = std::min(dt, cfg.stability_factor * c.nodes[i].cap / sim.cond[i]);
            }
            if (dt < 1e-18)
                throw SimulationError("step underflow: required step below 1e-18 s (stiff or "
                                      "degenerate network)");
            if (dt < 1e-17 && !warned) {
                res.flags.push_back("step limited below 1e-17 s");
                warned = true;
            }
            // Snap to the next waveform boundary or sample instant; a snap
            // step may be arbitrarily short without being an underflow.
            const double t_event = std::min(t_sample, sim.next_boundary(t));
            if (t + dt >= t_event) dt = t_event - t;

            const double tn = t + dt;
            for (size_t i = 0; i < n; ++i) {
                if (sim.role[i] == NodeRole::Rail) { pred[i] = sim.volt[i]; continue; }
                if (sim.integrated(static_cast<int>(i), t))
                    pred[i] = sim.volt[i] + dt * sim.cur[i] / c.nodes[i].cap;
                else
                    pred[i] = sim.drive[i]->wave.sample(tn);
            }
            if (heun) {
                sim.eval(pred, sim.cur2, nullptr);
                for (size_t i = 0; i < n; ++i) {
                    if (sim.role[i] == NodeRole::Rail) continue;
                    if (sim.integrated(static_cast<int>(i), t))
                        sim.volt[i] += 0.5 * dt * (sim.cur[i] + sim.cur2[i]) / c.nodes[i].cap;
                    else
                        sim.volt[i] = pred[i];
                }
            } else {
                for (size_t i = 0; i < n; ++i)
                    if (sim.role[i] != NodeRole::Rail) sim.volt[i] = pred[i];
            }
            t = tn;
        }
        t = t_sample;
        record(t);
        ++sample_idx;
    }

    for (const auto& series : res.voltages)
        for (double v : series)
            if (!std::isfinite(v)) throw SimulationError("non-finite node voltage in result");
    return res;
}

double supply_energy(const TransientResult& r, const std::string& source, double t0, double t1) {
    if (!(t1 > t0)) throw std::invalid_argument("supply_energy: empty window");
    if (t0 < r.times.front() - 1e-15 || t1 > r.times.back() + 1e-15)
        throw std::invalid_argument("supply_energy: window outside simulated span");
    const int s = r.source_series(source);
    const auto& vs = r.source_voltage[s];
    const auto& is = r.source_current[s];

    auto power_at = [&](double t) {
        auto it = std::upper_bound(r.times.begin(), r.times.end(), t);
        size_t j = std::min<size_t>(it - r.times.begin(), r.times.size() - 1);
        if (j == 0) j = 1;
        const double ta = r.times[j - 1], tb = r.times[j];
        const double w = (t - ta) / (tb - ta);
        const double v = vs[j - 1] + (vs[j] - vs[j - 1]) * w;
        const double i = is[j - 1] + (is[j] - is[j - 1]) * w;
        return v * i;
    };

    double energy = 0.0;
    double prev_t = t0, prev_p = power_at(t0);
    for (size_t j = 0; j < r.times.size(); ++j) {
        const double t = r.times[j];
        if (t <= t0 || t >= t1) continue;
        const double p = vs[j] * is[j];
        energy += 0.5 * (p + prev_p) * (t - prev_t);
        prev_t = t;
        prev_p = p;
    }
    energy += 0.5 * (prev_p + power_at(t1)) * (t1 - prev_t);
    return energy;
}

}  // namespace nwram
