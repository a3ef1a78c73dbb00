#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrp/batch.hpp"
#include "lrp/customer.hpp"
#include "lrp/feeder.hpp"
#include "lrp/fleet.hpp"
#include "lrp/inverse_rank.hpp"
#include "lrp/optimal_alpha.hpp"
#include "lrp/tariff.hpp"

namespace lrp {

// A study configuration: base day-ahead prices plus either a feeder with a
// charging fleet (grid study) or a single customer with an optional target
// profile (tariff study). Relative paths inside the file resolve against the
// file's own directory.
struct ScenarioConfig {
    std::string name;
    int days = 1;                 // price draws to simulate
    double price_noise = 0.0;     // relative half-width of the per-period price jitter
    unsigned long long price_seed = 1;
    PriceSchedule base_prices;

    std::optional<Feeder> feeder;
    FleetConfig fleet;

    std::optional<CustomerSpec> customer;
    std::optional<LoadProfile> target;  // full-meter target for the pricing round trip

    OptimalAlphaConfig optimal_alpha;
    InverseRankConfig inverse_rank;
};

ScenarioConfig parse_scenario(const std::string& json_text, const std::string& base_dir);
ScenarioConfig load_scenario(const std::string& path);

// Prices for one simulated day: each period scaled by an independent factor
// in [1 - noise, 1 + noise) drawn from a fixed-seed generator, so runs are
// reproducible bit for bit.
PriceSchedule day_prices(const ScenarioConfig& cfg, int day);

struct VariantDayReport {
    std::string variant;
    std::size_t violating_periods = 0;  // periods with any bus under the floor
    double min_voltage_pu = 0.0;
    double cost_at_beta = 0.0;   // charging energy priced at the day's linear prices
    double billed_cost = 0.0;    // charging increment billed under the variant's tariff
    double max_gap_kwh = 0.0;    // largest per-period distance to the centralized schedule
    bool lp_used = false;
};

struct DayReport {
    int day = 0;
    std::vector<VariantDayReport> variants;  // day_ahead, centralized, optimal_alpha, inverse_rank
};

struct FeederRunSummary {
    std::vector<DayReport> days;
    std::map<std::string, int> violation_days;  // variant -> days with any violation
};

struct CustomerRunSummary {
    AlphaSchedule optimal_alpha;
    AlphaSchedule inverse_rank_alpha;
    LoadProfile day_ahead_profile;
    LoadProfile lrp_profile;       // response to the target-matching tariff
    double day_ahead_cost = 0.0;
    double lrp_billed_cost = 0.0;
    double max_roundtrip_deviation_kwh = 0.0;
    double lambda_star = 0.0;
    std::vector<std::string> warnings;
};

struct ScenarioResult {
    std::optional<FeederRunSummary> feeder_run;
    std::optional<CustomerRunSummary> customer_run;
    std::vector<std::string> files_written;  // paths relative to the output directory
};

// Runs the study and writes its CSV and JSON outputs into out_dir (created if
// missing). Output bytes depend only on the scenario, so a rerun reproduces
// every file exactly.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                            ExecutionMode mode = ExecutionMode::parallel);

}  // namespace lrp
