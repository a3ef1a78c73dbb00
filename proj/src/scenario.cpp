#include "lrp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "lrp/csv.hpp"

namespace lrp {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string resolve(const std::string& base_dir, const std::string& p) {
    fs::path fp(p);
    if (fp.is_absolute() || base_dir.empty()) return p;
    return (fs::path(base_dir) / fp).string();
}

// Uniform in [0, 1) built directly from engine words, so the stream does not
// depend on library-specific distribution internals.
double unit_draw(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// What the bus pays for charging on top of its base load under a tariff.
double charging_bill(const LrpSchedule& s, const std::vector<double>& base_kwh,
                     const std::vector<double>& ev_kwh) {
    double c = 0.0;
    for (std::size_t t = 0; t < ev_kwh.size(); ++t) {
        const double base = base_kwh.empty() ? 0.0 : base_kwh[t];
        c += period_cost(s, t, base + ev_kwh[t]) - period_cost(s, t, base);
    }
    return c;
}

struct FeederVariant {
    std::string name;
    std::vector<std::vector<double>> ev_kwh;
    std::vector<AlphaSchedule> bus_alpha;  // per bus; empty means alpha == 0 everywhere
    bool lp_used = false;
};

void append_json_file(const std::string& out_dir, const std::string& name, const json& j,
                      std::vector<std::string>& files) {
    std::ofstream out(fs::path(out_dir) / name);
    if (!out) throw std::runtime_error("cannot write '" + name + "'");
    out << j.dump(2) << '\n';
    files.push_back(name);
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text, const std::string& base_dir) {
    const json j = json::parse(json_text);
    ScenarioConfig cfg;
    cfg.name = j.value("name", std::string("scenario"));
    cfg.days = j.value("days", 1);
    if (cfg.days < 1) throw std::invalid_argument("scenario needs at least one day");
    cfg.price_noise = j.value("price_noise", 0.0);
    if (!(cfg.price_noise >= 0.0 && cfg.price_noise < 1.0))
        throw std::invalid_argument("price noise must lie in [0, 1)");
    cfg.price_seed = j.value("price_seed", 1ULL);

    const double h = j.value("period_hours", 1.0);
    if (j.contains("prices_csv")) {
        cfg.base_prices =
            read_price_csv(resolve(base_dir, j.at("prices_csv").get<std::string>()), h).beta;
    } else if (j.contains("beta")) {
        cfg.base_prices = PriceSchedule(j.at("beta").get<std::vector<double>>(), h);
    } else {
        throw std::invalid_argument("scenario needs \"prices_csv\" or \"beta\"");
    }

    if (j.contains("feeder")) {
        if (j.at("feeder").is_string())
            cfg.feeder = load_feeder(resolve(base_dir, j.at("feeder").get<std::string>()));
        else
            cfg.feeder = parse_feeder(j.at("feeder").dump());
    }
    if (j.contains("fleet")) {
        const json& fj = j.at("fleet");
        cfg.fleet.charge_rate_kw = fj.value("charge_rate_kw", cfg.fleet.charge_rate_kw);
        cfg.fleet.energy_per_ev_kwh = fj.value("energy_per_ev_kwh", cfg.fleet.energy_per_ev_kwh);
        cfg.fleet.share_profiles_by_type =
            fj.value("share_profiles_by_type", cfg.fleet.share_profiles_by_type);
    }

    if (j.contains("customer")) {
        if (j.at("customer").is_string())
            cfg.customer = load_customer_spec(resolve(base_dir, j.at("customer").get<std::string>()));
        else
            cfg.customer = parse_customer_spec(j.at("customer").dump());
    }
    if (j.contains("target_csv"))
        cfg.target = read_target_csv(resolve(base_dir, j.at("target_csv").get<std::string>()));

    if (j.contains("optimal_alpha")) {
        const json& oj = j.at("optimal_alpha");
        cfg.optimal_alpha.alpha_seed = oj.value("alpha_seed", cfg.optimal_alpha.alpha_seed);
        cfg.optimal_alpha.theta = oj.value("theta", cfg.optimal_alpha.theta);
        cfg.optimal_alpha.reassign_seed_alpha =
            oj.value("reassign_seed_alpha", cfg.optimal_alpha.reassign_seed_alpha);
    }
    if (j.contains("inverse_rank")) {
        const json& ij = j.at("inverse_rank");
        cfg.inverse_rank.tau_min = ij.value("tau_min", cfg.inverse_rank.tau_min);
        cfg.inverse_rank.tau_max = ij.value("tau_max", cfg.inverse_rank.tau_max);
        cfg.inverse_rank.eta = ij.value("eta", cfg.inverse_rank.eta);
    }

    if (cfg.feeder && cfg.customer)
        throw std::invalid_argument("scenario must describe a feeder or a customer, not both");
    if (!cfg.feeder && !cfg.customer)
        throw std::invalid_argument("scenario must describe a feeder or a customer");
    if (cfg.customer && !cfg.target)
        throw std::invalid_argument("customer scenario needs \"target_csv\"");
    if (cfg.feeder) {
        bool any_ev = false;
        for (const FeederNode& nd : cfg.feeder->nodes) any_ev = any_ev || nd.ev_count > 0;
        if (!any_ev) throw std::invalid_argument("feeder scenario has no chargers anywhere");
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    return parse_scenario(read_text_file(path), fs::path(path).parent_path().string());
}

PriceSchedule day_prices(const ScenarioConfig& cfg, int day) {
    if (day < 0 || day >= cfg.days) throw std::out_of_range("day index out of range");
    PriceSchedule out = cfg.base_prices;
    if (cfg.price_noise == 0.0) return out;
    std::mt19937_64 gen(cfg.price_seed);
    gen.discard(static_cast<unsigned long long>(day) * out.n_periods());
    for (double& b : out.beta) b *= 1.0 + cfg.price_noise * (2.0 * unit_draw(gen) - 1.0);
    return out;
}

namespace {

FeederRunSummary run_feeder_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                                     ExecutionMode mode, std::vector<std::string>& files) {
    const Feeder& f = *cfg.feeder;
    const std::size_t n = cfg.base_prices.n_periods();
    const double h = cfg.base_prices.period_hours;

    std::vector<std::size_t> charging_buses;
    for (std::size_t b = 0; b < f.n_nodes(); ++b)
        if (f.nodes[b].ev_count > 0) charging_buses.push_back(b);

    FeederRunSummary summary;
    for (const char* v : {"day_ahead", "centralized", "optimal_alpha", "inverse_rank"})
        summary.violation_days[v] = 0;

    std::vector<std::vector<std::string>> price_rows, schedule_rows, voltage_rows, summary_rows;
    json jdays = json::array();

    for (int day = 0; day < cfg.days; ++day) {
        const PriceSchedule beta = day_prices(cfg, day);
        for (std::size_t t = 0; t < n; ++t)
            price_rows.push_back({std::to_string(day), std::to_string(t),
                                  format_double(beta.beta[t])});

        const FleetSchedule greedy = greedy_fleet_schedule(f, beta, cfg.fleet);
        const FleetSchedule central = voltage_constrained_schedule(f, beta, cfg.fleet);

        std::vector<FeederVariant> variants;
        variants.push_back({"day_ahead", greedy.ev_kwh, {}, false});
        variants.push_back({"centralized", central.ev_kwh, {}, central.lp_used});

        // Target-matching quadratic coefficients per charging bus, built from
        // the centralized schedule; each bus then optimizes for itself.
        {
            FeederVariant oa{"optimal_alpha", {}, {}, false};
            oa.ev_kwh.assign(f.n_nodes(), std::vector<double>(n, 0.0));
            oa.bus_alpha.resize(f.n_nodes());
            for (std::size_t b : charging_buses) {
                TargetProfile target;
                target.metering = Metering::shared;
                target.bidirectional = false;
                std::vector<double> base(n, f.nodes[b].load_kw * h), xh(n);
                for (std::size_t t = 0; t < n; ++t) xh[t] = base[t] + central.ev_kwh[b][t];
                target.x_hat = LoadProfile(std::move(xh));
                target.base_load = LoadProfile(std::move(base));
                oa.bus_alpha[b] = compute_alphas(beta, target, cfg.optimal_alpha);
                const CustomerSpec spec = bus_charging_spec(f.nodes[b], cfg.fleet, n, h);
                oa.ev_kwh[b] = optimize(LrpSchedule(oa.bus_alpha[b], beta), spec).profile.x;
            }
            variants.push_back(std::move(oa));
        }

        {
            FeederVariant ir{"inverse_rank", {}, {}, false};
            ir.ev_kwh.assign(f.n_nodes(), std::vector<double>(n, 0.0));
            const AlphaSchedule air = inverse_rank_alphas(beta, cfg.inverse_rank);
            const LrpSchedule tariff(air, beta);
            std::vector<CustomerSpec> specs;
            for (std::size_t b : charging_buses)
                specs.push_back(bus_charging_spec(f.nodes[b], cfg.fleet, n, h));
            const std::vector<OptimizerResult> res = batch_optimize(tariff, specs, mode);
            for (std::size_t i = 0; i < charging_buses.size(); ++i)
                ir.ev_kwh[charging_buses[i]] = res[i].profile.x;
            ir.bus_alpha.assign(f.n_nodes(), air);
            variants.push_back(std::move(ir));
        }

        DayReport day_report;
        day_report.day = day;
        const AlphaSchedule zero(std::vector<double>(n, 0.0));
        json jvariants = json::array();
        for (const FeederVariant& var : variants) {
            VariantDayReport rep;
            rep.variant = var.name;
            rep.lp_used = var.lp_used;

            const std::vector<std::vector<double>> vsq =
                batch_voltages(f, var.ev_kwh, n, h, mode);
            rep.min_voltage_pu = f.substation_v_pu;
            for (std::size_t t = 0; t < n; ++t) {
                if (!check_violations(f, vsq[t]).empty()) ++rep.violating_periods;
                for (std::size_t b = 0; b < f.n_nodes(); ++b)
                    rep.min_voltage_pu = std::min(rep.min_voltage_pu, std::sqrt(vsq[t][b]));
            }

            for (std::size_t b : charging_buses) {
                const std::vector<double> base(n, f.nodes[b].load_kw * h);
                for (std::size_t t = 0; t < n; ++t)
                    rep.cost_at_beta += beta.beta[t] * var.ev_kwh[b][t];
                const AlphaSchedule& a =
                    var.bus_alpha.empty() ? zero : var.bus_alpha[b];
                rep.billed_cost += charging_bill(LrpSchedule(a, beta), base, var.ev_kwh[b]);
                for (std::size_t t = 0; t < n; ++t)
                    rep.max_gap_kwh = std::max(
                        rep.max_gap_kwh, std::abs(var.ev_kwh[b][t] - central.ev_kwh[b][t]));
            }

            if (rep.violating_periods > 0) summary.violation_days[var.name] += 1;

            for (std::size_t b : charging_buses)
                for (std::size_t t = 0; t < n; ++t)
                    schedule_rows.push_back({std::to_string(day), var.name, f.nodes[b].name,
                                             std::to_string(t),
                                             format_double(var.ev_kwh[b][t])});
            for (std::size_t t = 0; t < n; ++t)
                for (std::size_t b = 0; b < f.n_nodes(); ++b)
                    voltage_rows.push_back({std::to_string(day), var.name, std::to_string(t),
                                            f.nodes[b].name,
                                            format_double(std::sqrt(vsq[t][b]))});
            summary_rows.push_back({std::to_string(day), var.name,
                                    std::to_string(rep.violating_periods),
                                    format_double(rep.min_voltage_pu),
                                    format_double(rep.cost_at_beta),
                                    format_double(rep.billed_cost),
                                    format_double(rep.max_gap_kwh),
                                    var.lp_used ? "1" : "0"});

            json jv;
            jv["variant"] = rep.variant;
            jv["violating_periods"] = rep.violating_periods;
            jv["min_voltage_pu"] = rep.min_voltage_pu;
            jv["cost_at_beta"] = rep.cost_at_beta;
            jv["billed_cost"] = rep.billed_cost;
            jv["max_gap_kwh"] = rep.max_gap_kwh;
            jv["lp_used"] = rep.lp_used;
            jvariants.push_back(std::move(jv));
            day_report.variants.push_back(std::move(rep));
        }
        json jd;
        jd["day"] = day;
        jd["variants"] = std::move(jvariants);
        jdays.push_back(std::move(jd));
        summary.days.push_back(std::move(day_report));
    }

    write_csv((fs::path(out_dir) / "prices.csv").string(), "day,period,beta", price_rows);
    files.push_back("prices.csv");
    write_csv((fs::path(out_dir) / "schedules.csv").string(),
              "day,variant,bus,period,ev_kwh", schedule_rows);
    files.push_back("schedules.csv");
    write_csv((fs::path(out_dir) / "voltages.csv").string(), "day,variant,period,bus,v_pu",
              voltage_rows);
    files.push_back("voltages.csv");
    write_csv((fs::path(out_dir) / "summary.csv").string(),
              "day,variant,violating_periods,min_v_pu,cost_at_beta,billed_cost,max_gap_kwh,lp_used",
              summary_rows);
    files.push_back("summary.csv");

    json jsum;
    jsum["name"] = cfg.name;
    jsum["days"] = std::move(jdays);
    jsum["violation_days"] = summary.violation_days;
    append_json_file(out_dir, "summary.json", jsum, files);
    return summary;
}

CustomerRunSummary run_customer_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                                         std::vector<std::string>& files) {
    const PriceSchedule beta = day_prices(cfg, 0);
    const CustomerSpec& spec = *cfg.customer;
    const std::size_t n = beta.n_periods();

    CustomerRunSummary out;

    TargetProfile target;
    target.x_hat = *cfg.target;
    if (!spec.base_load.empty()) target.base_load = LoadProfile(spec.base_load);
    target.metering = spec.metering;
    bool wants_injection = false;
    for (std::size_t t = 0; t < n; ++t) {
        const double base = spec.base_load.empty() ? 0.0 : spec.base_load[t];
        wants_injection = wants_injection || target.x_hat.x[t] - base < 0.0;
    }
    target.bidirectional = wants_injection || spec.export_energy_kwh > 0.0;

    out.optimal_alpha = compute_alphas(beta, target, cfg.optimal_alpha, &out.warnings);
    out.inverse_rank_alpha = inverse_rank_alphas(beta, cfg.inverse_rank);

    const OptimizerResult da = optimize_day_ahead(beta, spec);
    out.day_ahead_profile = da.profile;
    const LrpSchedule flat = day_ahead_schedule(beta);
    out.day_ahead_cost = spec.metering == Metering::shared
                             ? charging_bill(flat, spec.base_load, da.profile.x)
                             : total_cost(flat, da.profile);

    const RoundTripReport rt = verify_roundtrip(beta, target, out.optimal_alpha, spec);
    out.lrp_profile = rt.response;
    out.max_roundtrip_deviation_kwh = rt.max_deviation;
    out.lambda_star = rt.lambda_star;
    const LrpSchedule lrp_tariff(out.optimal_alpha, beta);
    out.lrp_billed_cost = spec.metering == Metering::shared
                              ? charging_bill(lrp_tariff, spec.base_load, rt.response.x)
                              : total_cost(lrp_tariff, rt.response);

    const LrpSchedule ir_tariff(out.inverse_rank_alpha, beta);
    const OptimizerResult ir = optimize(ir_tariff, spec);

    write_price_csv((fs::path(out_dir) / "alpha_optimal.csv").string(), lrp_tariff, true);
    files.push_back("alpha_optimal.csv");
    write_price_csv((fs::path(out_dir) / "alpha_inverse_rank.csv").string(), ir_tariff, true);
    files.push_back("alpha_inverse_rank.csv");
    write_result_csv((fs::path(out_dir) / "day_ahead_profile.csv").string(), flat, da.profile);
    files.push_back("day_ahead_profile.csv");
    write_result_csv((fs::path(out_dir) / "lrp_profile.csv").string(), lrp_tariff, rt.response);
    files.push_back("lrp_profile.csv");
    write_result_csv((fs::path(out_dir) / "inverse_rank_profile.csv").string(), ir_tariff,
                     ir.profile);
    files.push_back("inverse_rank_profile.csv");

    std::vector<std::vector<std::string>> rt_rows;
    for (std::size_t t = 0; t < n; ++t)
        rt_rows.push_back({std::to_string(t), format_double(target.x_hat.x[t]),
                           format_double(rt.response.x[t]), format_double(rt.deviation[t])});
    write_csv((fs::path(out_dir) / "roundtrip.csv").string(),
              "period,x_hat_kwh,x_kwh,deviation_kwh", rt_rows);
    files.push_back("roundtrip.csv");

    json jsum;
    jsum["name"] = cfg.name;
    jsum["day_ahead_cost"] = out.day_ahead_cost;
    jsum["lrp_billed_cost"] = out.lrp_billed_cost;
    jsum["max_roundtrip_deviation_kwh"] = out.max_roundtrip_deviation_kwh;
    jsum["lambda_star"] = out.lambda_star;
    jsum["warnings"] = out.warnings;
    append_json_file(out_dir, "summary.json", jsum, files);
    return out;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                            ExecutionMode mode) {
    fs::create_directories(out_dir);
    ScenarioResult result;
    if (cfg.feeder)
        result.feeder_run = run_feeder_scenario(cfg, out_dir, mode, result.files_written);
    else
        result.customer_run = run_customer_scenario(cfg, out_dir, result.files_written);
    return result;
}

}  // namespace lrp
