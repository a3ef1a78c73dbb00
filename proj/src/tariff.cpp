#include "lrp/tariff.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lrp {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw std::invalid_argument(std::string(what) + " is not finite at period " +
                                        std::to_string(i));
        }
    }
}

}  // namespace

PriceSchedule::PriceSchedule(std::vector<double> beta_in, double period_hours_in)
    : beta(std::move(beta_in)), period_hours(period_hours_in) {
    if (beta.empty()) throw std::invalid_argument("price schedule needs at least one period");
    if (!(period_hours > 0.0) || !std::isfinite(period_hours)) {
        throw std::invalid_argument("period length must be positive and finite");
    }
    require_finite(beta, "beta");
    for (std::size_t t = 0; t < beta.size(); ++t) {
        if (!(beta[t] > 0.0)) {
            throw std::invalid_argument("beta must be strictly positive at period " +
                                        std::to_string(t));
        }
    }
}

AlphaSchedule::AlphaSchedule(std::vector<double> alpha_in) : alpha(std::move(alpha_in)) {
    if (alpha.empty()) throw std::invalid_argument("alpha schedule needs at least one period");
    require_finite(alpha, "alpha");
    for (std::size_t t = 0; t < alpha.size(); ++t) {
        if (alpha[t] < 0.0) {
            throw std::invalid_argument("alpha must be nonnegative at period " +
                                        std::to_string(t));
        }
    }
}

LrpSchedule::LrpSchedule(AlphaSchedule a, PriceSchedule b)
    : alpha(std::move(a)), beta(std::move(b)) {
    if (alpha.n_periods() != beta.n_periods()) {
        throw std::invalid_argument("alpha and beta schedules must cover the same periods");
    }
}

LoadProfile::LoadProfile(std::vector<double> x_in) : x(std::move(x_in)) {
    require_finite(x, "load profile");
}

double LoadProfile::total() const { return std::accumulate(x.begin(), x.end(), 0.0); }

double marginal_price(const LrpSchedule& s, std::size_t t, double x_t) {
    if (t >= s.n_periods()) throw std::out_of_range("period index out of range");
    if (!std::isfinite(x_t)) throw std::invalid_argument("load must be finite");
    return s.alpha.alpha[t] * x_t + s.beta.beta[t];
}

double period_cost(const LrpSchedule& s, std::size_t t, double x_t) {
    if (t >= s.n_periods()) throw std::out_of_range("period index out of range");
    if (!std::isfinite(x_t)) throw std::invalid_argument("load must be finite");
    return s.alpha.alpha[t] * x_t * x_t + s.beta.beta[t] * x_t;
}

double total_cost(const LrpSchedule& s, const LoadProfile& p) {
    if (p.n_periods() != s.n_periods()) {
        throw std::invalid_argument("profile length does not match schedule");
    }
    double sum = 0.0;
    for (std::size_t t = 0; t < p.n_periods(); ++t) sum += period_cost(s, t, p.x[t]);
    return sum;
}

std::vector<BillLineItem> bill(const LrpSchedule& s, const LoadProfile& p) {
    if (p.n_periods() != s.n_periods()) {
        throw std::invalid_argument("profile length does not match schedule");
    }
    std::vector<BillLineItem> items(p.n_periods());
    for (std::size_t t = 0; t < p.n_periods(); ++t) {
        items[t].period = t;
        items[t].energy_kwh = p.x[t];
        items[t].marginal_price = marginal_price(s, t, p.x[t]);
        items[t].cost = period_cost(s, t, p.x[t]);
    }
    return items;
}

LrpSchedule day_ahead_schedule(PriceSchedule beta) {
    AlphaSchedule zeros(std::vector<double>(beta.n_periods(), 0.0));
    return LrpSchedule(std::move(zeros), std::move(beta));
}

}  // namespace lrp
