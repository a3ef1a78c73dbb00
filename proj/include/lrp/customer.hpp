#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lrp/tariff.hpp"

namespace lrp {

enum class Metering { separate, shared };

// Controllable-load description for one customer over one horizon.
//
// total_energy_kwh is the gross energy the controllable resource must consume;
// export_energy_kwh is the gross energy it must sell back. The optimizer's net
// equality is total - export. base_load is the uncontrollable part, billed on
// the same meter when metering == shared.
struct CustomerSpec {
    double total_energy_kwh = 0.0;
    double consume_bound_kw = 0.0;
    double inject_bound_kw = 0.0;
    double export_energy_kwh = 0.0;
    double local_limit_kw = 1e18;
    std::vector<double> base_load;  // kWh per period; empty means all zero
    Metering metering = Metering::separate;
};

struct OptimizerResult {
    LoadProfile profile;          // controllable net energy per period, kWh
    double lambda_star = 0.0;     // consumption-side equality multiplier, $/kWh
    double lambda_export = 0.0;   // export-side marginal value; NaN when no export
    double kkt_residual = 0.0;
    int iterations = 0;
};

struct KktReport {
    double lambda_hat = 0.0;          // consumption multiplier estimate (median)
    double nu_hat = 0.0;              // export multiplier estimate; NaN when unused
    double max_stationarity_residual = 0.0;
    double max_complementarity_violation = 0.0;
    double energy_mismatch = 0.0;
};

// Exact minimizer of sum_t alpha_t m_t^2 + beta_t m_t over the controllable
// decision, where m_t is the billed meter reading (net controllable plus base
// load when metering == shared). Consumption fills [0, hi_t] with
// hi_t = min(consume_bound, local_limit - base_t / h) * h and must total
// total_energy_kwh; exports fill [0, inject_bound * h] and must total
// export_energy_kwh. The two sides decouple into separable QPs solved by
// multiplier bisection; the returned profile is consumption minus export.
//
// Throws std::invalid_argument on malformed or infeasible specs and
// std::runtime_error if the consumption multiplier exceeds the export marginal
// value (a buy-above-sell regime this solver does not support).
OptimizerResult optimize(const LrpSchedule& schedule, const CustomerSpec& spec);

// Greedy schedule under alpha == 0: fill cheapest periods to their caps and
// export at the most expensive periods, earliest index first on ties. Returns
// the same profile as optimize() on the flat tariff.
OptimizerResult optimize_day_ahead(const PriceSchedule& beta, const CustomerSpec& spec);

// Stationarity, complementary slackness, and energy balance diagnostics for a
// candidate profile. Multiplier estimates are medians over interior periods.
KktReport kkt_check(const LrpSchedule& schedule, const CustomerSpec& spec,
                    const LoadProfile& profile);

// Per-period upper consumption caps in kWh (bounds used by the optimizer).
std::vector<double> consumption_caps(const PriceSchedule& beta, const CustomerSpec& spec);

CustomerSpec parse_customer_spec(const std::string& json_text);
CustomerSpec load_customer_spec(const std::string& path);
std::string customer_spec_to_json(const CustomerSpec& spec);

}  // namespace lrp
