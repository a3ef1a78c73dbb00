#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lrp/customer.hpp"
#include "lrp/tariff.hpp"

namespace lrp {

// Desired full-meter load shape the operator wants a customer to follow.
// base_load is the uncontrollable part (zeros when separately metered); the
// controllable target is x_hat - base_load.
struct TargetProfile {
    LoadProfile x_hat;
    LoadProfile base_load;  // empty means all zero
    Metering metering = Metering::separate;
    bool bidirectional = false;  // controllable resource may inject
};

struct OptimalAlphaConfig {
    double alpha_seed = 1e-13;  // quadratic coefficient pinned at the seed period
    double theta = 10.0;        // protection value replacing invalid coefficients
    bool reassign_seed_alpha = false;  // move the seed onto the smallest valid alpha
};

// Period with the highest base price among periods with strictly positive
// controllable target, lowest index on ties. Throws when the target places no
// energy anywhere.
std::size_t select_seed(const PriceSchedule& beta, const TargetProfile& target);

// Quadratic coefficients that make the target profile stationary for a
// cost-minimizing customer: alpha_t = (2 alpha_seed s + beta_seed - beta_t) /
// (2 x_hat_t), where s is the seed-period target. Non-finite or negative
// values are replaced by theta. With a shared meter and a unidirectional
// resource, theta is forced to 0 and the seed numerator uses only the
// controllable part, which zeroes the coefficient at periods whose price
// already discourages charging.
AlphaSchedule compute_alphas(const PriceSchedule& beta, const TargetProfile& target,
                             const OptimalAlphaConfig& cfg,
                             std::vector<std::string>* warnings = nullptr);

struct RoundTripReport {
    LoadProfile response;                 // controllable net profile the customer chooses
    std::vector<double> deviation;        // |meter - x_hat| per period, kWh
    std::vector<double> protected_bound;  // analytic slack bound at protected periods
    double max_deviation = 0.0;
    double lambda_star = 0.0;  // marginal price level the schedule pins
};

// Runs the customer optimizer under the constructed schedule and reports how
// closely the target is reproduced. The deviation at a theta-protected period
// t is bounded by max(0, lambda_star - beta_t) / (2 theta).
RoundTripReport verify_roundtrip(const PriceSchedule& beta, const TargetProfile& target,
                                 const AlphaSchedule& alpha, const CustomerSpec& spec);

}  // namespace lrp
