#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace lrp {

// One bus of a radial feeder. Impedances describe the line from the parent
// bus; the root carries none. Loads are balanced across the listed phases, so
// voltage math runs once and applies to each phase alike.
struct FeederNode {
    std::string name;
    int parent = -1;        // index into Feeder::nodes; -1 at the root
    double r_pu = 0.0;      // line resistance, per unit
    double x_pu = 0.0;      // line reactance, per unit
    std::string phases = "abc";
};

// Radial feeder in topological order (every parent precedes its children).
struct Feeder {
    std::vector<FeederNode> nodes;
    double base_kva = 1000.0;      // three-phase power base
    double base_kv = 1.0;          // voltage base; metadata for absolute units
    double substation_v_pu = 1.0;  // fixed root voltage
    double v_min_pu = 0.95;

    std::size_t n_nodes() const { return nodes.size(); }
    int depth(std::size_t i) const { return depth_[i]; }
    // Sum of line resistances from the root down to node i.
    double resistance_to_root(std::size_t i) const { return r_sum_[i]; }

    // Validates the tree and fills the derived caches. Called by the parsers;
    // call it after building a Feeder by hand.
    void finalize();

  private:
    std::vector<int> depth_;
    std::vector<double> r_sum_;
};

// Index of the bus with the given id. Throws when absent.
std::size_t node_index(const Feeder& f, const std::string& id);

Feeder parse_feeder(const std::string& json_text);
Feeder load_feeder(const std::string& path);
std::string feeder_to_json(const Feeder& f);

// Per-phase power of a balanced three-phase building load: each phase carries
// a third of the average power, with reactive power at a 0.9 power factor.
struct PhasePower {
    double p_kw = 0.0;
    double q_kvar = 0.0;
};
PhasePower map_building_load(double energy_kwh, double period_hours);

// Charging is split the same way but draws no reactive power.
PhasePower map_ev_load(double energy_kwh, double period_hours);

// Squared voltage magnitudes under the linearized power flow: the drop across
// a line is 2 (R P + X Q) where P, Q aggregate everything at or below the
// child bus. Injections are per-unit withdrawals (consumption positive).
std::vector<double> squared_voltages(const Feeder& f, const std::vector<double>& p_pu,
                                     const std::vector<double>& q_pu);

// Shared line resistance of the root paths of buses a and b (the path to
// their lowest common ancestor). d v^2_a / d p_b equals -2 times this.
double common_resistance(const Feeder& f, std::size_t a, std::size_t b);

// Row of the squared-voltage sensitivity at bus b: entry k is
// d v^2_b / d p_k = -2 * common_resistance(b, k).
std::vector<double> sensitivity_row(const Feeder& f, std::size_t b);

// Indices of buses whose voltage lies below the floor, with a small guard so
// a bus sitting exactly on the bound does not flag.
std::vector<std::size_t> check_violations(const Feeder& f, const std::vector<double>& v_sq);

// Report of every (period, bus, phase) below the floor, one CSV row each,
// with the per-unit voltage magnitude. v_sq_by_period holds one squared-
// voltage vector per period.
void write_violation_csv(const std::string& path, const Feeder& f,
                         const std::vector<std::vector<double>>& v_sq_by_period);

}  // namespace lrp
