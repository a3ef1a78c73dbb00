#include "lrp/optimal_alpha.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrp {

namespace {

double base_at(const TargetProfile& target, std::size_t t) {
    return target.base_load.x.empty() ? 0.0 : target.base_load.x[t];
}

void validate_target(const PriceSchedule& beta, const TargetProfile& target) {
    const std::size_t n = beta.n_periods();
    if (n == 0) throw std::invalid_argument("price schedule is empty");
    if (target.x_hat.n_periods() != n)
        throw std::invalid_argument("target profile length does not match the price schedule");
    if (!target.base_load.x.empty() && target.base_load.n_periods() != n)
        throw std::invalid_argument("base load length does not match the price schedule");
    for (std::size_t t = 0; t < n; ++t) {
        if (!std::isfinite(target.x_hat.x[t]))
            throw std::invalid_argument("target profile has a non-finite entry");
        const double b = base_at(target, t);
        if (!std::isfinite(b) || b < 0.0)
            throw std::invalid_argument("base load entries must be finite and non-negative");
        if (target.x_hat.x[t] - b < 0.0 && !target.bidirectional)
            throw std::invalid_argument(
                "target demands injection but the resource is unidirectional");
    }
}

}  // namespace

std::size_t select_seed(const PriceSchedule& beta, const TargetProfile& target) {
    validate_target(beta, target);
    const std::size_t n = beta.n_periods();
    std::size_t best = n;
    for (std::size_t t = 0; t < n; ++t) {
        if (target.x_hat.x[t] - base_at(target, t) <= 0.0) continue;
        if (best == n || beta.beta[t] > beta.beta[best]) best = t;  // strict: earliest wins ties
    }
    if (best == n)
        throw std::invalid_argument("target profile places no controllable load anywhere");
    return best;
}

AlphaSchedule compute_alphas(const PriceSchedule& beta, const TargetProfile& target,
                             const OptimalAlphaConfig& cfg, std::vector<std::string>* warnings) {
    validate_target(beta, target);
    if (!std::isfinite(cfg.alpha_seed) || cfg.alpha_seed <= 0.0)
        throw std::invalid_argument("seed coefficient must be finite and positive");

    const bool shared_uni = target.metering == Metering::shared && !target.bidirectional;
    const double theta_eff = shared_uni ? 0.0 : cfg.theta;
    if (!shared_uni && (!std::isfinite(cfg.theta) || cfg.theta <= 0.0))
        throw std::invalid_argument("protection coefficient must be finite and positive");

    const std::size_t n = beta.n_periods();
    const std::size_t seed = select_seed(beta, target);

    // All pinned periods share the marginal price the seed period has at its
    // target level. With a shared meter and a unidirectional resource the
    // level is taken at the controllable part alone, so periods priced above
    // it get alpha <= 0 and fall back to the zero protection value.
    const double seed_level = shared_uni ? target.x_hat.x[seed] - base_at(target, seed)
                                         : target.x_hat.x[seed];
    const double level = 2.0 * cfg.alpha_seed * seed_level + beta.beta[seed];

    std::vector<double> alpha(n, 0.0);
    std::vector<double> raw(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t t = 0; t < n; ++t) {
        if (t == seed) {
            alpha[t] = cfg.alpha_seed;
            continue;
        }
        const double xh = target.x_hat.x[t];
        if (xh != 0.0) raw[t] = (level - beta.beta[t]) / (2.0 * xh);
        alpha[t] = (std::isfinite(raw[t]) && raw[t] >= 0.0) ? raw[t] : theta_eff;
    }

    if (cfg.reassign_seed_alpha) {
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t)
            if (t != seed && std::isfinite(raw[t]) && raw[t] >= 0.0) lo = std::min(lo, raw[t]);
        if (std::isfinite(lo)) alpha[seed] = lo;
    }

    if (warnings) {
        if (shared_uni)
            for (std::size_t t = 0; t < n; ++t)
                if (t != seed && target.x_hat.x[t] == 0.0 && beta.beta[t] < level)
                    warnings->push_back(
                        "an empty-target period is priced below the pinned marginal level and "
                        "carries no quadratic term; a cost-minimizing customer will fill it");
        bool wants_injection = false;
        for (std::size_t t = 0; t < n; ++t)
            if (target.x_hat.x[t] - base_at(target, t) < 0.0) wants_injection = true;
        if (wants_injection) {
            const std::size_t top = static_cast<std::size_t>(
                std::max_element(beta.beta.begin(), beta.beta.end()) - beta.beta.begin());
            if (target.x_hat.x[top] - base_at(target, top) >= 0.0)
                warnings->push_back(
                    "injection target is not at the highest-price period; a cost-minimizing "
                    "customer will move some export there");
        }
    }

    return AlphaSchedule(std::move(alpha));
}

RoundTripReport verify_roundtrip(const PriceSchedule& beta, const TargetProfile& target,
                                 const AlphaSchedule& alpha, const CustomerSpec& spec) {
    validate_target(beta, target);
    const std::size_t n = beta.n_periods();
    if (alpha.n_periods() != n)
        throw std::invalid_argument("alpha schedule length does not match the price schedule");

    // The spec's energy totals must reproduce the target's controllable split,
    // otherwise the comparison below measures the wrong thing.
    double pos = 0.0, neg = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double ctl = target.x_hat.x[t] - base_at(target, t);
        if (ctl > 0.0) pos += ctl;
        else neg -= ctl;
    }
    const double tol = 1e-6 * std::max(1.0, pos + neg);
    if (std::abs(pos - spec.total_energy_kwh) > tol ||
        std::abs(neg - spec.export_energy_kwh) > tol)
        throw std::invalid_argument(
            "customer energy totals do not match the target profile split");

    const LrpSchedule schedule(alpha, beta);
    const OptimizerResult res = optimize(schedule, spec);

    RoundTripReport rep;
    rep.response = res.profile;
    rep.deviation.resize(n);
    rep.protected_bound.assign(n, std::numeric_limits<double>::quiet_NaN());
    rep.lambda_star = res.lambda_star;
    const double nu = res.lambda_export;  // NaN when the spec exports nothing

    for (std::size_t t = 0; t < n; ++t) {
        const double b = base_at(target, t);
        const double meter = res.profile.x[t] + b;
        rep.deviation[t] = std::abs(meter - target.x_hat.x[t]);
        rep.max_deviation = std::max(rep.max_deviation, rep.deviation[t]);

        if (target.x_hat.x[t] - b != 0.0) continue;  // bound applies to idle periods only
        // Marginal price at zero controllable load; slack below lambda invites
        // a consumption sliver, slack above nu an export sliver, each damped
        // by the local quadratic coefficient.
        const double m0 = 2.0 * alpha.alpha[t] * b + beta.beta[t];
        double gap = std::max(0.0, res.lambda_star - m0);
        if (std::isfinite(nu)) gap = std::max(gap, m0 - nu);
        if (alpha.alpha[t] > 0.0)
            rep.protected_bound[t] = gap / (2.0 * alpha.alpha[t]);
        else
            rep.protected_bound[t] = gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return rep;
}

}  // namespace lrp
