#include "lrp/fleet.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "lrp/customer.hpp"
#include "lrp/simplex.hpp"

namespace lrp {

CustomerSpec bus_charging_spec(const FeederNode& nd, const FleetConfig& cfg,
                               std::size_t n_periods, double period_hours) {
    CustomerSpec spec;
    spec.total_energy_kwh = nd.ev_count * cfg.energy_per_ev_kwh;
    spec.consume_bound_kw = nd.ev_count * cfg.charge_rate_kw;
    spec.local_limit_kw = nd.limit_kw;
    spec.base_load.assign(n_periods, nd.load_kw * period_hours);
    spec.metering = Metering::shared;
    return spec;
}

namespace {

double schedule_energy_cost(const PriceSchedule& beta,
                            const std::vector<std::vector<double>>& ev_kwh) {
    double cost = 0.0;
    for (const auto& bus : ev_kwh)
        for (std::size_t t = 0; t < bus.size(); ++t) cost += beta.beta[t] * bus[t];
    return cost;
}

// Group key for profile sharing: the bus type when present and sharing is on,
// otherwise the bus itself.
std::string group_key(const FeederNode& nd, const FleetConfig& cfg, std::size_t bus) {
    if (cfg.share_profiles_by_type && !nd.type.empty()) return nd.type;
    return "#" + std::to_string(bus);
}

}  // namespace

FleetSchedule greedy_fleet_schedule(const Feeder& f, const PriceSchedule& beta,
                                    const FleetConfig& cfg) {
    if (!(cfg.charge_rate_kw > 0.0) || !(cfg.energy_per_ev_kwh > 0.0))
        throw std::invalid_argument("charge rate and per-charger energy must be positive");
    const std::size_t n = beta.n_periods();
    const double h = beta.period_hours;

    FleetSchedule out;
    out.ev_kwh.assign(f.n_nodes(), std::vector<double>(n, 0.0));
    for (std::size_t b = 0; b < f.n_nodes(); ++b) {
        const FeederNode& nd = f.nodes[b];
        if (nd.ev_count == 0) continue;
        const OptimizerResult res = optimize_day_ahead(beta, bus_charging_spec(nd, cfg, n, h));
        out.ev_kwh[b] = res.profile.x;
    }
    out.energy_cost = schedule_energy_cost(beta, out.ev_kwh);
    return out;
}

FleetSchedule voltage_constrained_schedule(const Feeder& f, const PriceSchedule& beta,
                                           const FleetConfig& cfg) {
    FleetSchedule greedy = greedy_fleet_schedule(f, beta, cfg);
    const std::size_t n = beta.n_periods();
    const double h = beta.period_hours;
    if (violating_periods(f, greedy.ev_kwh, n, h).empty()) return greedy;

    // Charging buses grouped for profile sharing. Variable u_{g,t} is the
    // per-charger energy of group g in period t; bus charging is ev_count * u.
    struct Group {
        std::vector<std::size_t> buses;
        double total_ev = 0.0;
    };
    std::map<std::string, Group> groups;
    for (std::size_t b = 0; b < f.n_nodes(); ++b) {
        if (f.nodes[b].ev_count == 0) continue;
        Group& g = groups[group_key(f.nodes[b], cfg, b)];
        g.buses.push_back(b);
        g.total_ev += f.nodes[b].ev_count;
    }
    if (groups.empty()) return greedy;  // nothing charges; greedy is all zeros

    std::vector<const Group*> glist;
    std::vector<std::string> gnames;
    for (const auto& [name, g] : groups) {
        glist.push_back(&g);
        gnames.push_back(name);
    }
    const std::size_t n_groups = glist.size();
    const auto var = [n](std::size_t g, std::size_t t) { return g * n + t; };

    LpProblem lp;
    lp.c.assign(n_groups * n, 0.0);
    lp.lo.assign(n_groups * n, 0.0);
    lp.hi.assign(n_groups * n, 0.0);
    for (std::size_t g = 0; g < n_groups; ++g) {
        // Per-charger cap: charger rating, tightened by the member bus whose
        // transformer leaves the least room above its base load.
        double cap_kw = cfg.charge_rate_kw;
        for (std::size_t b : glist[g]->buses) {
            const FeederNode& nd = f.nodes[b];
            const double room = (nd.limit_kw - nd.load_kw) / nd.ev_count;
            cap_kw = std::min(cap_kw, room);
        }
        if (!(cap_kw > 0.0))
            throw std::runtime_error("a charging bus has no transformer room above its base load");
        for (std::size_t t = 0; t < n; ++t) {
            lp.c[var(g, t)] = beta.beta[t] * glist[g]->total_ev;
            lp.hi[var(g, t)] = cap_kw * h;
        }
    }

    for (std::size_t g = 0; g < n_groups; ++g) {
        LpRow row;
        row.a.assign(n_groups * n, 0.0);
        for (std::size_t t = 0; t < n; ++t) row.a[var(g, t)] = 1.0;
        row.rhs = cfg.energy_per_ev_kwh;
        row.type = 'E';
        lp.rows.push_back(std::move(row));
    }

    // One voltage row per leaf bus and period. The drop below the load-only
    // base case is linear in charging power, with coefficient
    // 2 * shared-path resistance / (h * base_kva) per kWh.
    std::vector<std::size_t> leaves;
    {
        std::vector<char> has_child(f.n_nodes(), 0);
        for (std::size_t b = 1; b < f.n_nodes(); ++b) has_child[f.nodes[b].parent] = 1;
        for (std::size_t b = 0; b < f.n_nodes(); ++b)
            if (!has_child[b]) leaves.push_back(b);
    }
    const std::vector<std::vector<double>> no_ev;
    const double floor_sq = f.v_min_pu * f.v_min_pu;
    for (std::size_t t = 0; t < n; ++t) {
        const std::vector<double> base_sq = period_voltages_sq(f, no_ev, t, h);
        for (std::size_t leaf : leaves) {
            LpRow row;
            row.a.assign(n_groups * n, 0.0);
            for (std::size_t g = 0; g < n_groups; ++g) {
                double coef = 0.0;
                for (std::size_t b : glist[g]->buses)
                    coef += 2.0 * common_resistance(f, leaf, b) * f.nodes[b].ev_count;
                row.a[var(g, t)] = coef / (h * f.base_kva);
            }
            row.rhs = base_sq[leaf] - floor_sq;
            row.type = 'L';
            lp.rows.push_back(std::move(row));
        }
    }

    const LpSolution sol = solve_lp(lp);
    if (sol.status == LpStatus::infeasible)
        throw std::runtime_error(
            "no charging schedule can hold every bus above the voltage floor");
    if (sol.status != LpStatus::optimal)
        throw std::runtime_error("voltage-constrained schedule did not converge");

    FleetSchedule out;
    out.ev_kwh.assign(f.n_nodes(), std::vector<double>(n, 0.0));
    for (std::size_t g = 0; g < n_groups; ++g)
        for (std::size_t b : glist[g]->buses)
            for (std::size_t t = 0; t < n; ++t)
                out.ev_kwh[b][t] = f.nodes[b].ev_count * sol.x[var(g, t)];
    out.energy_cost = schedule_energy_cost(beta, out.ev_kwh);
    out.lp_used = true;
    out.lp_iterations = sol.iterations;
    assert(violating_periods(f, out.ev_kwh, n, h).empty());
    return out;
}

void period_injections(const Feeder& f, const std::vector<std::vector<double>>& ev_kwh,
                       std::size_t t, double period_hours, std::vector<double>& p_pu,
                       std::vector<double>& q_pu) {
    if (!(period_hours > 0.0)) throw std::invalid_argument("period length must be positive");
    const std::size_t nb = f.n_nodes();
    if (!ev_kwh.empty() && ev_kwh.size() != nb)
        throw std::invalid_argument("charging schedule must have one row per bus");
    p_pu.assign(nb, 0.0);
    q_pu.assign(nb, 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
        double p_kw = f.nodes[b].load_kw;
        if (!ev_kwh.empty()) {
            if (t >= ev_kwh[b].size())
                throw std::out_of_range("period index past the end of the charging schedule");
            p_kw += ev_kwh[b][t] / period_hours;
        }
        // Charging draws no reactive power; only the base load does.
        q_pu[b] = reactive_from_pf(f.nodes[b].load_kw, f.nodes[b].power_factor) / f.base_kva;
        p_pu[b] = p_kw / f.base_kva;
    }
}

std::vector<double> period_voltages_sq(const Feeder& f,
                                       const std::vector<std::vector<double>>& ev_kwh,
                                       std::size_t t, double period_hours) {
    std::vector<double> p_pu, q_pu;
    period_injections(f, ev_kwh, t, period_hours, p_pu, q_pu);
    return squared_voltages(f, p_pu, q_pu);
}

std::vector<std::size_t> violating_periods(const Feeder& f,
                                           const std::vector<std::vector<double>>& ev_kwh,
                                           std::size_t n_periods, double period_hours) {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < n_periods; ++t)
        if (!check_violations(f, period_voltages_sq(f, ev_kwh, t, period_hours)).empty())
            out.push_back(t);
    return out;
}

}  // namespace lrp
