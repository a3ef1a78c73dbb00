#include "lrp/inverse_rank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lrp {

std::vector<double> rank_multipliers(const PriceSchedule& beta, double tau_min, double tau_max) {
    const std::size_t n = beta.n_periods();
    if (n == 0) throw std::invalid_argument("price schedule is empty");
    if (!std::isfinite(tau_min) || !std::isfinite(tau_max) || tau_min < 0.0 || tau_max < tau_min)
        throw std::invalid_argument("multiplier range must satisfy 0 <= tau_min <= tau_max");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&beta](std::size_t a, std::size_t b) {
        return beta.beta[a] > beta.beta[b];
    });

    const double step = n > 1 ? (tau_max - tau_min) / static_cast<double>(n - 1) : 0.0;
    std::vector<double> tau(n);
    for (std::size_t k = 0; k < n; ++k)
        tau[order[k]] = tau_min + static_cast<double>(k) * step;
    return tau;
}

AlphaSchedule inverse_rank_alphas(const PriceSchedule& beta, const InverseRankConfig& cfg) {
    if (!std::isfinite(cfg.eta) || cfg.eta <= 0.0)
        throw std::invalid_argument("multiplier scale must be finite and positive");
    std::vector<double> tau = rank_multipliers(beta, cfg.tau_min, cfg.tau_max);
    for (double& v : tau) v *= cfg.eta;
    return AlphaSchedule(std::move(tau));
}

}  // namespace lrp
