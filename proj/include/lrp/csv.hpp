#pragma once

#include <string>
#include <vector>

#include "lrp/tariff.hpp"

namespace lrp {

// Price CSV with header "period,beta" or "period,beta,alpha". Periods must be
// 0..n-1 in order. Exact header names are required.
LrpSchedule read_price_csv(const std::string& path, double period_hours = 1.0);

// Writes "period,beta,alpha" when with_alpha, else "period,beta".
void write_price_csv(const std::string& path, const LrpSchedule& s, bool with_alpha = true);

// Target CSV with header "period,x_hat_kwh".
LoadProfile read_target_csv(const std::string& path);
void write_target_csv(const std::string& path, const LoadProfile& p);

// Optimizer result CSV with header "period,x_kwh,marginal_price".
void write_result_csv(const std::string& path, const LrpSchedule& s, const LoadProfile& p);

// Full-precision decimal formatting used by every CSV writer so repeated runs
// are byte-identical.
std::string format_double(double v);

// Generic writer: a header line followed by pre-formatted cell rows.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path);

}  // namespace lrp
