#pragma once

#include <cstddef>
#include <vector>

#include "lrp/customer.hpp"
#include "lrp/feeder.hpp"
#include "lrp/tariff.hpp"

namespace lrp {

struct FleetConfig {
    double charge_rate_kw = 7.0;      // per charger
    double energy_per_ev_kwh = 14.0;  // energy each charger must deliver over the horizon
    bool share_profiles_by_type = true;  // buses with equal type share one per-EV profile
};

struct FleetSchedule {
    std::vector<std::vector<double>> ev_kwh;  // [bus][period], charging energy
    double energy_cost = 0.0;                 // sum over periods of beta * charging energy
    bool lp_used = false;                     // false when the greedy fill already fit
    int lp_iterations = 0;

    std::size_t n_buses() const { return ev_kwh.size(); }
};

// Customer-side view of one charging bus: the chargers are the controllable
// resource, the building load rides the same meter.
CustomerSpec bus_charging_spec(const FeederNode& nd, const FleetConfig& cfg,
                               std::size_t n_periods, double period_hours);

// Cheapest-first fill per bus, capped by charger rating and the local
// transformer limit net of base load. Ignores feeder voltages.
FleetSchedule greedy_fleet_schedule(const Feeder& f, const PriceSchedule& beta,
                                    const FleetConfig& cfg);

// Greedy schedule when it keeps all bus voltages above the floor, otherwise
// the cheapest schedule subject to linearized voltage constraints at every
// leaf bus (voltages fall monotonically away from the root when every bus
// consumes, so leaf rows bound the whole feeder). Charging runs at unity
// power factor. Throws std::runtime_error when no feasible schedule exists.
FleetSchedule voltage_constrained_schedule(const Feeder& f, const PriceSchedule& beta,
                                           const FleetConfig& cfg);

// Per-unit bus injections for one period: base loads at their power factor
// plus charging energy converted to average power. Pass an empty schedule for
// the load-only base case.
void period_injections(const Feeder& f, const std::vector<std::vector<double>>& ev_kwh,
                       std::size_t t, double period_hours, std::vector<double>& p_pu,
                       std::vector<double>& q_pu);

// Squared bus voltages for one period of a charging schedule.
std::vector<double> period_voltages_sq(const Feeder& f,
                                       const std::vector<std::vector<double>>& ev_kwh,
                                       std::size_t t, double period_hours);

// Periods in which at least one bus sits below the voltage floor.
std::vector<std::size_t> violating_periods(const Feeder& f,
                                           const std::vector<std::vector<double>>& ev_kwh,
                                           std::size_t n_periods, double period_hours);

}  // namespace lrp
