#include "lrp/feeder.hpp"

#include <cassert>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lrp {

void Feeder::finalize() {
    const std::size_t n = nodes.size();
    if (n == 0) throw std::invalid_argument("feeder has no buses");
    if (!(std::isfinite(base_kva) && base_kva > 0.0))
        throw std::invalid_argument("power base must be finite and positive");
    if (!(std::isfinite(substation_v_pu) && substation_v_pu > 0.0))
        throw std::invalid_argument("substation voltage must be finite and positive");
    if (!(std::isfinite(v_min_pu) && v_min_pu > 0.0))
        throw std::invalid_argument("voltage floor must be finite and positive");

    depth_.assign(n, 0);
    r_sum_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const FeederNode& nd = nodes[i];
        if (i == 0) {
            if (nd.parent != -1) throw std::invalid_argument("first bus must be the root");
            if (nd.r_pu != 0.0 || nd.x_pu != 0.0)
                throw std::invalid_argument("root bus carries no line impedance");
        } else {
            if (nd.parent < 0 || static_cast<std::size_t>(nd.parent) >= i)
                throw std::invalid_argument(
                    "buses must be listed with every parent before its children");
            if (!(std::isfinite(nd.r_pu) && nd.r_pu >= 0.0) ||
                !(std::isfinite(nd.x_pu) && nd.x_pu >= 0.0))
                throw std::invalid_argument("line impedances must be finite and non-negative");
            depth_[i] = depth_[nd.parent] + 1;
            r_sum_[i] = r_sum_[nd.parent] + nd.r_pu;
        }
        if (!(std::isfinite(nd.load_kw) && nd.load_kw >= 0.0))
            throw std::invalid_argument("bus loads must be finite and non-negative");
        if (!(nd.power_factor > 0.0 && nd.power_factor <= 1.0))
            throw std::invalid_argument("power factor must lie in (0, 1]");
        if (nd.ev_count < 0) throw std::invalid_argument("charger count must be non-negative");
        if (!(nd.limit_kw > 0.0)) throw std::invalid_argument("bus limit must be positive");
    }
}

double reactive_from_pf(double p, double power_factor) {
    if (!(power_factor > 0.0 && power_factor <= 1.0))
        throw std::invalid_argument("power factor must lie in (0, 1]");
    return p * std::tan(std::acos(power_factor));
}

std::vector<double> squared_voltages(const Feeder& f, const std::vector<double>& p_pu,
                                     const std::vector<double>& q_pu) {
    const std::size_t n = f.n_nodes();
    if (p_pu.size() != n || q_pu.size() != n)
        throw std::invalid_argument("injection vectors must have one entry per bus");

    // Aggregate flow entering each bus from above: own injection plus every
    // descendant. Children sit after parents, so one reverse sweep suffices.
    std::vector<double> p_sub = p_pu;
    std::vector<double> q_sub = q_pu;
    for (std::size_t i = n; i-- > 1;) {
        p_sub[f.nodes[i].parent] += p_sub[i];
        q_sub[f.nodes[i].parent] += q_sub[i];
    }

    std::vector<double> v_sq(n);
    v_sq[0] = f.substation_v_pu * f.substation_v_pu;
    for (std::size_t i = 1; i < n; ++i) {
        const FeederNode& nd = f.nodes[i];
        v_sq[i] = v_sq[nd.parent] - 2.0 * (nd.r_pu * p_sub[i] + nd.x_pu * q_sub[i]);
    }
    return v_sq;
}

double common_resistance(const Feeder& f, std::size_t a, std::size_t b) {
    const std::size_t n = f.n_nodes();
    if (a >= n || b >= n) throw std::out_of_range("bus index out of range");
    while (f.depth(a) > f.depth(b)) a = static_cast<std::size_t>(f.nodes[a].parent);
    while (f.depth(b) > f.depth(a)) b = static_cast<std::size_t>(f.nodes[b].parent);
    while (a != b) {
        a = static_cast<std::size_t>(f.nodes[a].parent);
        b = static_cast<std::size_t>(f.nodes[b].parent);
    }
    return f.resistance_to_root(a);
}

std::vector<double> sensitivity_row(const Feeder& f, std::size_t b) {
    std::vector<double> row(f.n_nodes());
    for (std::size_t k = 0; k < row.size(); ++k)
        row[k] = -2.0 * common_resistance(f, b, k);
    return row;
}

std::vector<std::size_t> check_violations(const Feeder& f, const std::vector<double>& v_sq) {
    if (v_sq.size() != f.n_nodes())
        throw std::invalid_argument("voltage vector must have one entry per bus");
    const double floor_sq = f.v_min_pu * f.v_min_pu;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v_sq.size(); ++i)
        if (v_sq[i] < floor_sq - 1e-9) out.push_back(i);
    return out;
}

namespace {

Feeder feeder_from_json(const nlohmann::json& j) {
    Feeder f;
    f.base_kva = j.at("base_kva").get<double>();
    f.substation_v_pu = j.value("substation_v_pu", 1.0);
    f.v_min_pu = j.value("v_min_pu", 0.95);

    std::vector<std::string> names;
    for (const auto& nj : j.at("nodes")) {
        FeederNode nd;
        nd.name = nj.at("name").get<std::string>();
        if (nj.contains("parent") && !nj.at("parent").is_null()) {
            const std::string pname = nj.at("parent").get<std::string>();
            nd.parent = -1;
            for (std::size_t k = 0; k < names.size(); ++k)
                if (names[k] == pname) nd.parent = static_cast<int>(k);
            if (nd.parent < 0)
                throw std::invalid_argument("unknown parent bus '" + pname + "'");
        }
        nd.r_pu = nj.value("r_pu", 0.0);
        nd.x_pu = nj.value("x_pu", 0.0);
        nd.load_kw = nj.value("load_kw", 0.0);
        nd.power_factor = nj.value("power_factor", 1.0);
        nd.ev_count = nj.value("ev_count", 0);
        nd.limit_kw = nj.value("limit_kw", 1e18);
        nd.type = nj.value("type", std::string());
        names.push_back(nd.name);
        f.nodes.push_back(std::move(nd));
    }
    f.finalize();
    return f;
}

}  // namespace

Feeder parse_feeder(const std::string& json_text) {
    return feeder_from_json(nlohmann::json::parse(json_text));
}

Feeder load_feeder(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open feeder file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_feeder(ss.str());
}

std::string feeder_to_json(const Feeder& f) {
    nlohmann::json j;
    j["base_kva"] = f.base_kva;
    j["substation_v_pu"] = f.substation_v_pu;
    j["v_min_pu"] = f.v_min_pu;
    j["nodes"] = nlohmann::json::array();
    for (const FeederNode& nd : f.nodes) {
        nlohmann::json nj;
        nj["name"] = nd.name;
        if (nd.parent >= 0) nj["parent"] = f.nodes[nd.parent].name;
        else nj["parent"] = nullptr;
        nj["r_pu"] = nd.r_pu;
        nj["x_pu"] = nd.x_pu;
        nj["load_kw"] = nd.load_kw;
        nj["power_factor"] = nd.power_factor;
        nj["ev_count"] = nd.ev_count;
        if (nd.limit_kw < 1e18) nj["limit_kw"] = nd.limit_kw;
        if (!nd.type.empty()) nj["type"] = nd.type;
        j["nodes"].push_back(std::move(nj));
    }
    return j.dump(2);
}

}  // namespace lrp
