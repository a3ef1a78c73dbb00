#pragma once

#include <vector>

#include "lrp/tariff.hpp"

namespace lrp {

// Heuristic quadratic coefficients that need no target profile: expensive
// periods get gentle slopes, cheap periods steep ones, so load pushed out of
// the peak spreads across the valley instead of piling onto one period.
struct InverseRankConfig {
    double tau_min = 1.0;   // multiplier at the highest-price period
    double tau_max = 3.0;   // multiplier at the lowest-price period
    double eta = 1e-4;      // $/kWh^2 per unit multiplier
};

// Multipliers evenly spaced over [tau_min, tau_max], assigned in inverse price
// order: the k-th largest base price receives the k-th smallest multiplier.
// Ties rank the earlier period higher (smaller multiplier).
std::vector<double> rank_multipliers(const PriceSchedule& beta, double tau_min, double tau_max);

// alpha_t = eta * multiplier_t.
AlphaSchedule inverse_rank_alphas(const PriceSchedule& beta, const InverseRankConfig& cfg);

}  // namespace lrp
