#include "lrp/customer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "lrp/qp.hpp"

namespace lrp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> resolve_base(const CustomerSpec& spec, std::size_t n) {
    if (spec.base_load.empty()) return std::vector<double>(n, 0.0);
    if (spec.base_load.size() != n) {
        throw std::invalid_argument("base load length does not match the schedule horizon");
    }
    for (double v : spec.base_load) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("base load entries must be finite and nonnegative");
        }
    }
    return spec.base_load;
}

void validate_spec(const CustomerSpec& spec) {
    auto bad = [](double v) { return !std::isfinite(v); };
    if (bad(spec.total_energy_kwh) || bad(spec.consume_bound_kw) || bad(spec.inject_bound_kw) ||
        bad(spec.export_energy_kwh) || bad(spec.local_limit_kw)) {
        throw std::invalid_argument("customer spec contains non-finite values");
    }
    if (spec.total_energy_kwh < 0.0) throw std::invalid_argument("total energy must be >= 0");
    if (spec.consume_bound_kw < 0.0) throw std::invalid_argument("consume bound must be >= 0");
    if (spec.inject_bound_kw < 0.0) throw std::invalid_argument("inject bound must be >= 0");
    if (spec.export_energy_kwh < 0.0) throw std::invalid_argument("export energy must be >= 0");
    if (!(spec.local_limit_kw > 0.0)) throw std::invalid_argument("local limit must be > 0");
}

double median(std::vector<double> v) {
    if (v.empty()) return kNaN;
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return (v.size() % 2 == 1) ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::vector<double> consumption_caps(const PriceSchedule& beta, const CustomerSpec& spec) {
    validate_spec(spec);
    const std::size_t n = beta.n_periods();
    const double h = beta.period_hours;
    std::vector<double> base = resolve_base(spec, n);
    std::vector<double> hi(n);
    for (std::size_t t = 0; t < n; ++t) {
        double headroom_kw = spec.local_limit_kw - base[t] / h;
        if (headroom_kw < -1e-12) {
            throw std::invalid_argument("base load alone exceeds the local limit at period " +
                                        std::to_string(t));
        }
        hi[t] = std::min(spec.consume_bound_kw, std::max(0.0, headroom_kw)) * h;
    }
    return hi;
}

OptimizerResult optimize(const LrpSchedule& schedule, const CustomerSpec& spec) {
    const std::size_t n = schedule.n_periods();
    const double h = schedule.beta.period_hours;
    validate_spec(spec);
    std::vector<double> base = resolve_base(spec, n);
    std::vector<double> hi = consumption_caps(schedule.beta, spec);

    const double cap_total = std::accumulate(hi.begin(), hi.end(), 0.0);
    if (spec.total_energy_kwh > cap_total + 1e-9 * std::max(1.0, spec.total_energy_kwh)) {
        throw std::invalid_argument("infeasible: required energy exceeds consumption capacity");
    }
    const double emax_per = spec.inject_bound_kw * h;
    if (spec.export_energy_kwh > emax_per * static_cast<double>(n) +
                                     1e-9 * std::max(1.0, spec.export_energy_kwh)) {
        throw std::invalid_argument("infeasible: required export exceeds injection capacity");
    }

    // Meter offset: with a shared meter the quadratic price acts on net load
    // including the base, so the consumption block is solved in the shifted
    // variable y_t = c_t + base_t.
    std::vector<double> offset(n, 0.0);
    if (spec.metering == Metering::shared) offset = base;

    OptimizerResult res;

    QpProblem cons;
    cons.a = schedule.alpha.alpha;
    cons.b = schedule.beta.beta;
    cons.lo = offset;
    cons.hi.resize(n);
    for (std::size_t t = 0; t < n; ++t) cons.hi[t] = offset[t] + hi[t];
    cons.total = spec.total_energy_kwh + std::accumulate(offset.begin(), offset.end(), 0.0);
    QpSolution ysol = solve_separable_qp(cons);
    res.lambda_star = ysol.lambda;
    res.iterations = ysol.iterations;

    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = ysol.x[t] - offset[t];

    if (spec.export_energy_kwh > 0.0) {
        // Export block in e_t >= 0: cost alpha (o - e)^2 + beta (o - e) is
        // alpha e^2 - (2 alpha o + beta) e up to a constant.
        QpProblem exp_blk;
        exp_blk.a = schedule.alpha.alpha;
        exp_blk.b.resize(n);
        for (std::size_t t = 0; t < n; ++t) {
            exp_blk.b[t] = -(2.0 * schedule.alpha.alpha[t] * offset[t] + schedule.beta.beta[t]);
        }
        exp_blk.lo.assign(n, 0.0);
        exp_blk.hi.assign(n, emax_per);
        exp_blk.total = spec.export_energy_kwh;
        QpSolution esol = solve_separable_qp(exp_blk);
        res.lambda_export = -esol.lambda;
        res.iterations += esol.iterations;
        if (res.lambda_star > res.lambda_export +
                                  1e-9 * std::max({1.0, std::fabs(res.lambda_star),
                                                   std::fabs(res.lambda_export)})) {
            throw std::runtime_error(
                "consumption margin exceeds export margin; overlapping buy/sell "
                "schedules are not supported");
        }
        for (std::size_t t = 0; t < n; ++t) x[t] -= esol.x[t];
    } else {
        res.lambda_export = kNaN;
    }

    res.profile = LoadProfile(std::move(x));
    res.kkt_residual = kkt_check(schedule, spec, res.profile).max_stationarity_residual;
    return res;
}

OptimizerResult optimize_day_ahead(const PriceSchedule& beta, const CustomerSpec& spec) {
    const std::size_t n = beta.n_periods();
    validate_spec(spec);
    std::vector<double> hi = consumption_caps(beta, spec);
    const double h = beta.period_hours;

    const double cap_total = std::accumulate(hi.begin(), hi.end(), 0.0);
    if (spec.total_energy_kwh > cap_total + 1e-9 * std::max(1.0, spec.total_energy_kwh)) {
        throw std::invalid_argument("infeasible: required energy exceeds consumption capacity");
    }
    const double emax_per = spec.inject_bound_kw * h;
    if (spec.export_energy_kwh > emax_per * static_cast<double>(n) +
                                     1e-9 * std::max(1.0, spec.export_energy_kwh)) {
        throw std::invalid_argument("infeasible: required export exceeds injection capacity");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return beta.beta[a] < beta.beta[b];
    });

    std::vector<double> x(n, 0.0);
    double rem = spec.total_energy_kwh;
    double lambda_star = beta.beta[order.front()];
    for (std::size_t t : order) {
        if (rem <= 0.0) break;
        double d = std::min(hi[t], rem);
        x[t] = d;
        rem -= d;
        lambda_star = beta.beta[t];
    }

    double lambda_export = kNaN;
    if (spec.export_energy_kwh > 0.0) {
        rem = spec.export_energy_kwh;
        for (auto it = order.rbegin(); it != order.rend() && rem > 0.0; ++it) {
            double d = std::min(emax_per, rem);
            x[*it] -= d;
            rem -= d;
            lambda_export = beta.beta[*it];
        }
        if (lambda_star > lambda_export) {
            throw std::runtime_error(
                "consumption margin exceeds export margin; overlapping buy/sell "
                "schedules are not supported");
        }
    }

    OptimizerResult res;
    res.profile = LoadProfile(std::move(x));
    res.lambda_star = lambda_star;
    res.lambda_export = lambda_export;
    res.iterations = 0;
    res.kkt_residual =
        kkt_check(day_ahead_schedule(beta), spec, res.profile).max_stationarity_residual;
    return res;
}

KktReport kkt_check(const LrpSchedule& schedule, const CustomerSpec& spec,
                    const LoadProfile& profile) {
    const std::size_t n = schedule.n_periods();
    if (profile.n_periods() != n) {
        throw std::invalid_argument("profile length does not match schedule");
    }
    validate_spec(spec);
    std::vector<double> base = resolve_base(spec, n);
    std::vector<double> hi = consumption_caps(schedule.beta, spec);
    const double emax_per = spec.inject_bound_kw * schedule.beta.period_hours;

    std::vector<double> offset(n, 0.0);
    if (spec.metering == Metering::shared) offset = base;

    const double scale = 1e-9;
    std::vector<double> m(n);
    for (std::size_t t = 0; t < n; ++t) {
        m[t] = 2.0 * schedule.alpha.alpha[t] * (profile.x[t] + offset[t]) +
               schedule.beta.beta[t];
    }

    // Interior stationarity values per side; exports are the negative part.
    std::vector<double> cons_interior, exp_interior;
    for (std::size_t t = 0; t < n; ++t) {
        double c = std::max(profile.x[t], 0.0);
        double e = std::max(-profile.x[t], 0.0);
        double tol = scale * std::max(1.0, hi[t]);
        if (c > tol && c < hi[t] - tol) cons_interior.push_back(m[t]);
        if (e > tol && e < emax_per - tol) exp_interior.push_back(m[t]);
    }

    KktReport rep;
    rep.lambda_hat = median(cons_interior);
    rep.nu_hat = median(exp_interior);

    // Fallback separators when a side has no interior period: midpoint of the
    // tightest range consistent with the bound pattern.
    auto separator = [&](bool export_side) {
        double lo_need = -std::numeric_limits<double>::infinity();
        double hi_need = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            double c = std::max(profile.x[t], 0.0);
            double e = std::max(-profile.x[t], 0.0);
            double tol = scale * std::max(1.0, std::max(hi[t], emax_per));
            if (!export_side) {
                if (c >= hi[t] - tol && hi[t] > tol) lo_need = std::max(lo_need, m[t]);
                if (c <= tol && e <= tol) hi_need = std::min(hi_need, m[t]);
            } else {
                if (e >= emax_per - tol && emax_per > tol) hi_need = std::min(hi_need, m[t]);
                if (e <= tol && c <= tol) lo_need = std::max(lo_need, m[t]);
            }
        }
        if (!std::isfinite(lo_need) && !std::isfinite(hi_need)) return kNaN;
        if (!std::isfinite(lo_need)) return hi_need;
        if (!std::isfinite(hi_need)) return lo_need;
        return 0.5 * (lo_need + hi_need);
    };
    if (std::isnan(rep.lambda_hat)) rep.lambda_hat = separator(false);
    if (std::isnan(rep.nu_hat) && spec.export_energy_kwh > 0.0) rep.nu_hat = separator(true);

    double stat = 0.0, comp = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        double c = std::max(profile.x[t], 0.0);
        double e = std::max(-profile.x[t], 0.0);
        double tol = scale * std::max(1.0, std::max(hi[t], emax_per));
        if (c > tol && c < hi[t] - tol) stat = std::max(stat, std::fabs(m[t] - rep.lambda_hat));
        if (e > tol && e < emax_per - tol) stat = std::max(stat, std::fabs(m[t] - rep.nu_hat));
        if (!std::isnan(rep.lambda_hat)) {
            // At an upper consumption bound the marginal must not exceed the
            // multiplier; away from consumption the marginal must not fall
            // below it.
            if (c >= hi[t] - tol && hi[t] > tol) {
                comp = std::max(comp, m[t] - rep.lambda_hat);
            }
            if (c <= tol && e <= tol) comp = std::max(comp, rep.lambda_hat - m[t]);
        }
        if (!std::isnan(rep.nu_hat)) {
            // At the injection cap the marginal must be at least the export
            // value; at an idle period it must not exceed it.
            if (e >= emax_per - tol && emax_per > tol) {
                comp = std::max(comp, rep.nu_hat - m[t]);
            }
            if (e <= tol && c <= tol) comp = std::max(comp, m[t] - rep.nu_hat);
        }
    }
    rep.max_stationarity_residual = std::isnan(stat) ? 0.0 : stat;
    rep.max_complementarity_violation = std::max(comp, 0.0);
    rep.energy_mismatch = std::fabs(profile.total() -
                                    (spec.total_energy_kwh - spec.export_energy_kwh));
    return rep;
}

CustomerSpec parse_customer_spec(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("customer spec is not valid JSON: ") + e.what());
    }
    CustomerSpec s;
    s.total_energy_kwh = j.at("total_energy_kwh").get<double>();
    s.consume_bound_kw = j.at("consume_bound_kw").get<double>();
    s.inject_bound_kw = j.value("inject_bound_kw", 0.0);
    s.export_energy_kwh = j.value("export_energy_kwh", 0.0);
    s.local_limit_kw = j.value("local_limit_kw", 1e18);
    if (j.contains("base_load")) s.base_load = j.at("base_load").get<std::vector<double>>();
    std::string metering = j.value("metering", "separate");
    if (metering == "separate") {
        s.metering = Metering::separate;
    } else if (metering == "shared") {
        s.metering = Metering::shared;
    } else {
        throw std::invalid_argument("metering must be \"separate\" or \"shared\"");
    }
    validate_spec(s);
    return s;
}

CustomerSpec load_customer_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open customer spec: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_customer_spec(ss.str());
}

std::string customer_spec_to_json(const CustomerSpec& spec) {
    nlohmann::json j;
    j["total_energy_kwh"] = spec.total_energy_kwh;
    j["consume_bound_kw"] = spec.consume_bound_kw;
    j["inject_bound_kw"] = spec.inject_bound_kw;
    j["export_energy_kwh"] = spec.export_energy_kwh;
    j["local_limit_kw"] = spec.local_limit_kw;
    j["base_load"] = spec.base_load;
    j["metering"] = spec.metering == Metering::shared ? "shared" : "separate";
    return j.dump(2);
}

}  // namespace lrp
