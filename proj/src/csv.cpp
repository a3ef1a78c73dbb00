#include "lrp/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lrp {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, const std::string& path, std::size_t row) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        while (used < s.size() && (s[used] == ' ' || s[used] == '\r')) ++used;
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(path + ": malformed number \"" + s + "\" at row " +
                                 std::to_string(row));
    }
}

void check_period_column(const std::vector<std::vector<std::string>>& rows,
                         const std::string& path) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        long p = std::lround(parse_number(rows[i][0], path, i));
        if (p != static_cast<long>(i - 1)) {
            throw std::runtime_error(path + ": periods must run 0..n-1 in order");
        }
    }
}

}  // namespace

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split_line(line));
    }
    if (rows.empty()) throw std::runtime_error(path + ": empty CSV");
    return rows;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV: " + path);
    out << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
}

LrpSchedule read_price_csv(const std::string& path, double period_hours) {
    auto rows = read_csv_rows(path);
    const auto& header = rows[0];
    bool with_alpha = false;
    if (header.size() == 2 && header[0] == "period" && header[1] == "beta") {
        with_alpha = false;
    } else if (header.size() == 3 && header[0] == "period" && header[1] == "beta" &&
               header[2] == "alpha") {
        with_alpha = true;
    } else {
        throw std::runtime_error(path +
                                 ": header must be \"period,beta\" or \"period,beta,alpha\"");
    }
    check_period_column(rows, path);
    std::vector<double> beta, alpha;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != header.size()) {
            throw std::runtime_error(path + ": wrong field count at row " + std::to_string(i));
        }
        beta.push_back(parse_number(rows[i][1], path, i));
        if (with_alpha) alpha.push_back(parse_number(rows[i][2], path, i));
    }
    if (!with_alpha) alpha.assign(beta.size(), 0.0);
    return LrpSchedule(AlphaSchedule(std::move(alpha)),
                       PriceSchedule(std::move(beta), period_hours));
}

void write_price_csv(const std::string& path, const LrpSchedule& s, bool with_alpha) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV: " + path);
    out << (with_alpha ? "period,beta,alpha\n" : "period,beta\n");
    for (std::size_t t = 0; t < s.n_periods(); ++t) {
        out << t << ',' << format_double(s.beta.beta[t]);
        if (with_alpha) out << ',' << format_double(s.alpha.alpha[t]);
        out << '\n';
    }
}

LoadProfile read_target_csv(const std::string& path) {
    auto rows = read_csv_rows(path);
    if (rows[0].size() != 2 || rows[0][0] != "period" || rows[0][1] != "x_hat_kwh") {
        throw std::runtime_error(path + ": header must be \"period,x_hat_kwh\"");
    }
    check_period_column(rows, path);
    std::vector<double> x;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 2) {
            throw std::runtime_error(path + ": wrong field count at row " + std::to_string(i));
        }
        x.push_back(parse_number(rows[i][1], path, i));
    }
    return LoadProfile(std::move(x));
}

void write_target_csv(const std::string& path, const LoadProfile& p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV: " + path);
    out << "period,x_hat_kwh\n";
    for (std::size_t t = 0; t < p.n_periods(); ++t) {
        out << t << ',' << format_double(p.x[t]) << '\n';
    }
}

void write_result_csv(const std::string& path, const LrpSchedule& s, const LoadProfile& p) {
    if (p.n_periods() != s.n_periods()) {
        throw std::invalid_argument("profile length does not match schedule");
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV: " + path);
    out << "period,x_kwh,marginal_price\n";
    for (std::size_t t = 0; t < p.n_periods(); ++t) {
        out << t << ',' << format_double(p.x[t]) << ','
            << format_double(marginal_price(s, t, p.x[t])) << '\n';
    }
}

}  // namespace lrp
