#pragma once

#include <cstddef>
#include <vector>

namespace lrp {

// Day-ahead base prices, one entry per period. All entries strictly positive.
struct PriceSchedule {
    std::vector<double> beta;   // $/kWh
    double period_hours = 1.0;  // length of each period in hours

    PriceSchedule() = default;
    PriceSchedule(std::vector<double> beta_in, double period_hours_in);

    std::size_t n_periods() const { return beta.size(); }
};

// Quadratic price coefficients, one entry per period. All entries finite and >= 0.
struct AlphaSchedule {
    std::vector<double> alpha;  // $/kWh^2

    AlphaSchedule() = default;
    explicit AlphaSchedule(std::vector<double> alpha_in);

    std::size_t n_periods() const { return alpha.size(); }
};

// Load-responsive tariff: marginal price alpha_t * x_t + beta_t.
struct LrpSchedule {
    AlphaSchedule alpha;
    PriceSchedule beta;

    LrpSchedule() = default;
    LrpSchedule(AlphaSchedule a, PriceSchedule b);

    std::size_t n_periods() const { return beta.n_periods(); }
};

// Per-period energy in kWh. Negative entries mean injection back to the grid.
struct LoadProfile {
    std::vector<double> x;  // kWh

    LoadProfile() = default;
    explicit LoadProfile(std::vector<double> x_in);

    std::size_t n_periods() const { return x.size(); }
    double total() const;
};

struct BillLineItem {
    std::size_t period = 0;
    double energy_kwh = 0.0;
    double marginal_price = 0.0;  // $/kWh at the billed consumption level
    double cost = 0.0;            // $
};

// Marginal price alpha_t * x_t + beta_t at period t.
double marginal_price(const LrpSchedule& s, std::size_t t, double x_t);

// Cost alpha_t * x_t^2 + beta_t * x_t for period t. Applies unchanged to
// negative x_t, so injection is paid the same quadratic schedule.
double period_cost(const LrpSchedule& s, std::size_t t, double x_t);

// Sum of period costs over the horizon. Profile length must match the schedule.
double total_cost(const LrpSchedule& s, const LoadProfile& p);

// Extra cost of adding add_kwh on top of base_kwh on one meter. An empty base
// means zero. With alpha == 0 this is just the energy priced at beta; a
// quadratic tariff also charges for pushing the meter further up its slope.
double incremental_cost(const LrpSchedule& s, const std::vector<double>& base_kwh,
                        const std::vector<double>& add_kwh);

// Itemized bill; line items sum to total_cost within roundoff.
std::vector<BillLineItem> bill(const LrpSchedule& s, const LoadProfile& p);

// Flat tariff with alpha identically zero over the same horizon as beta.
LrpSchedule day_ahead_schedule(PriceSchedule beta);

}  // namespace lrp
