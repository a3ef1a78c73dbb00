#include "lrp/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kInfUpper = 1e17;  // upper bounds at or above this are treated as absent

struct Tableau {
    std::size_t m = 0;        // rows
    std::size_t n_struct = 0; // structural columns
    std::size_t n_total = 0;  // structural + slack + artificial
    std::size_t art_start = 0;
    std::vector<double> a;    // dense column-major, m * n_total
    std::vector<double> rhs;  // length m, non-negative

    double* col(std::size_t j) { return a.data() + j * m; }
    const double* col(std::size_t j) const { return a.data() + j * m; }
};

class Simplex {
  public:
    Simplex(Tableau tab, int max_iterations)
        : t_(std::move(tab)), max_iters_(max_iterations), basis_(t_.m), x_b_(t_.rhs) {
        binv_.assign(t_.m * t_.m, 0.0);
        for (std::size_t i = 0; i < t_.m; ++i) binv_[i * t_.m + i] = 1.0;
    }

    void set_initial_basis(std::vector<std::size_t> basis) {
        basis_ = std::move(basis);
        is_basic_.assign(t_.n_total, 0);
        for (std::size_t j : basis_) is_basic_[j] = 1;
    }

    // Minimizes cost over the current feasible basis. Columns at or past
    // col_limit never enter. Returns optimal or unbounded/iteration_limit.
    LpStatus run(const std::vector<double>& cost, std::size_t col_limit) {
        for (;;) {
            if (iterations_ >= max_iters_) return LpStatus::iteration_limit;

            // y = c_B B^-1, then Bland: smallest column with negative reduced cost.
            std::vector<double> y(t_.m, 0.0);
            for (std::size_t i = 0; i < t_.m; ++i) {
                const double cb = cost[basis_[i]];
                if (cb == 0.0) continue;
                const double* row = &binv_[i * t_.m];
                for (std::size_t j = 0; j < t_.m; ++j) y[j] += cb * row[j];
            }
            std::size_t enter = t_.n_total;
            for (std::size_t j = 0; j < col_limit; ++j) {
                if (in_basis(j)) continue;
                const double* aj = t_.col(j);
                double red = cost[j];
                for (std::size_t i = 0; i < t_.m; ++i) red -= y[i] * aj[i];
                if (red < -kCostTol) { enter = j; break; }
            }
            if (enter == t_.n_total) return LpStatus::optimal;

            std::vector<double> d = apply_binv(t_.col(enter));
            std::size_t leave = t_.m;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < t_.m; ++i) {
                if (d[i] <= kPivotTol) continue;
                const double ratio = x_b_[i] / d[i];
                if (ratio < best - 1e-12 ||
                    (ratio < best + 1e-12 && (leave == t_.m || basis_[i] < basis_[leave]))) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == t_.m) return LpStatus::unbounded;
            pivot(enter, leave, d, best);
        }
    }

    // Degenerate pivots that remove zero-valued artificials from the basis
    // where any real column can replace them; rows that admit none are
    // redundant and keep their artificial pinned at zero.
    void expel_artificials() {
        for (std::size_t i = 0; i < t_.m; ++i) {
            if (basis_[i] < t_.art_start) continue;
            std::size_t enter = t_.n_total;
            std::vector<double> d;
            for (std::size_t j = 0; j < t_.art_start && enter == t_.n_total; ++j) {
                if (in_basis(j)) continue;
                d = apply_binv(t_.col(j));
                if (std::abs(d[i]) > 1e-7) enter = j;
            }
            if (enter != t_.n_total) pivot(enter, i, d, 0.0);
        }
    }

    double objective(const std::vector<double>& cost) const {
        double v = 0.0;
        for (std::size_t i = 0; i < t_.m; ++i) v += cost[basis_[i]] * x_b_[i];
        return v;
    }

    std::vector<double> structural_values() const {
        std::vector<double> x(t_.n_struct, 0.0);
        for (std::size_t i = 0; i < t_.m; ++i)
            if (basis_[i] < t_.n_struct) x[basis_[i]] = x_b_[i];
        return x;
    }

    int iterations() const { return iterations_; }

  private:
    bool in_basis(std::size_t j) const { return is_basic_[j] != 0; }

    std::vector<double> apply_binv(const double* v) const {
        std::vector<double> out(t_.m, 0.0);
        for (std::size_t i = 0; i < t_.m; ++i) {
            const double* row = &binv_[i * t_.m];
            double s = 0.0;
            for (std::size_t j = 0; j < t_.m; ++j) s += row[j] * v[j];
            out[i] = s;
        }
        return out;
    }

    void pivot(std::size_t enter, std::size_t leave, const std::vector<double>& d, double step) {
        for (std::size_t i = 0; i < t_.m; ++i) x_b_[i] -= step * d[i];
        x_b_[leave] = step;
        for (std::size_t i = 0; i < t_.m; ++i) {
            assert(x_b_[i] > -1e-6);
            if (x_b_[i] < 0.0) x_b_[i] = 0.0;  // roundoff dust from the ratio test
        }

        double* prow = &binv_[leave * t_.m];
        const double piv = d[leave];
        for (std::size_t j = 0; j < t_.m; ++j) prow[j] /= piv;
        for (std::size_t i = 0; i < t_.m; ++i) {
            if (i == leave || d[i] == 0.0) continue;
            double* row = &binv_[i * t_.m];
            const double f = d[i];
            for (std::size_t j = 0; j < t_.m; ++j) row[j] -= f * prow[j];
        }
        is_basic_[basis_[leave]] = 0;
        is_basic_[enter] = 1;
        basis_[leave] = enter;
        ++iterations_;
    }

    Tableau t_;
    int max_iters_ = 0;
    int iterations_ = 0;
    std::vector<std::size_t> basis_;
    std::vector<char> is_basic_;
    std::vector<double> x_b_;
    std::vector<double> binv_;  // row-major m x m
};

}  // namespace

LpSolution solve_lp(const LpProblem& p, int max_iterations) {
    const std::size_t n = p.n_vars();
    if (n == 0) throw std::invalid_argument("linear program has no variables");
    std::vector<double> lo = p.lo.empty() ? std::vector<double>(n, 0.0) : p.lo;
    std::vector<double> hi =
        p.hi.empty() ? std::vector<double>(n, std::numeric_limits<double>::infinity()) : p.hi;
    if (lo.size() != n || hi.size() != n)
        throw std::invalid_argument("bound vectors must match the variable count");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(p.c[i])) throw std::invalid_argument("objective must be finite");
        if (!std::isfinite(lo[i])) throw std::invalid_argument("lower bounds must be finite");
        if (hi[i] < lo[i]) throw std::invalid_argument("bounds must satisfy lo <= hi");
    }
    for (const LpRow& r : p.rows) {
        if (r.a.size() != n) throw std::invalid_argument("row length must match variable count");
        if (!std::isfinite(r.rhs)) throw std::invalid_argument("row bound must be finite");
        if (r.type != 'L' && r.type != 'E' && r.type != 'G')
            throw std::invalid_argument("row type must be 'L', 'E', or 'G'");
    }

    // Shift to y = x - lo and collect rows, appending one bound row per
    // finite upper bound.
    struct Shifted { std::vector<double> a; double rhs; char type; };
    std::vector<Shifted> rows;
    rows.reserve(p.rows.size() + n);
    for (const LpRow& r : p.rows) {
        double b = r.rhs;
        for (std::size_t i = 0; i < n; ++i) b -= r.a[i] * lo[i];
        rows.push_back({r.a, b, r.type});
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (hi[i] >= kInfUpper) continue;
        std::vector<double> a(n, 0.0);
        a[i] = 1.0;
        rows.push_back({std::move(a), hi[i] - lo[i], 'L'});
    }

    const std::size_t m = rows.size();
    if (m == 0) throw std::invalid_argument("linear program needs at least one constraint");

    // Normalize to non-negative right-hand sides, then count slack columns.
    std::size_t n_slack = 0;
    for (Shifted& r : rows) {
        if (r.rhs < 0.0) {
            for (double& v : r.a) v = -v;
            r.rhs = -r.rhs;
            if (r.type == 'L') r.type = 'G';
            else if (r.type == 'G') r.type = 'L';
        }
        if (r.type != 'E') ++n_slack;
    }

    Tableau tab;
    tab.m = m;
    tab.n_struct = n;
    tab.art_start = n + n_slack;
    tab.n_total = tab.art_start + m;  // one artificial slot per row; unused stay zero
    tab.a.assign(tab.n_total * m, 0.0);
    tab.rhs.resize(m);

    std::vector<std::size_t> basis(m);
    std::vector<double> phase1_cost(tab.n_total, 0.0);
    std::size_t slack_next = n;
    std::size_t n_art = 0;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t i = 0; i < n; ++i) tab.col(i)[r] = rows[r].a[i];
        tab.rhs[r] = rows[r].rhs;
        bool needs_art = true;
        if (rows[r].type == 'L') {
            tab.col(slack_next)[r] = 1.0;
            basis[r] = slack_next++;
            needs_art = false;
        } else if (rows[r].type == 'G') {
            tab.col(slack_next)[r] = -1.0;
            ++slack_next;
        }
        if (needs_art) {
            const std::size_t aj = tab.art_start + n_art++;
            tab.col(aj)[r] = 1.0;
            phase1_cost[aj] = 1.0;
            basis[r] = aj;
        }
    }
    assert(slack_next == tab.art_start);

    Simplex s(std::move(tab), max_iterations);
    s.set_initial_basis(std::move(basis));

    LpSolution sol;
    const std::size_t art_start = n + n_slack;

    LpStatus st = s.run(phase1_cost, art_start + m);
    sol.iterations = s.iterations();
    if (st != LpStatus::optimal) {
        sol.status = st == LpStatus::unbounded ? LpStatus::infeasible : st;
        return sol;
    }
    double scale = 1.0;
    for (const Shifted& r : rows) scale = std::max(scale, std::abs(r.rhs));
    if (s.objective(phase1_cost) > 1e-7 * scale) {
        sol.status = LpStatus::infeasible;
        return sol;
    }
    s.expel_artificials();

    std::vector<double> phase2_cost(art_start + m, 0.0);
    for (std::size_t i = 0; i < n; ++i) phase2_cost[i] = p.c[i];
    st = s.run(phase2_cost, art_start);
    sol.iterations = s.iterations();
    sol.status = st;
    if (st != LpStatus::optimal) return sol;

    std::vector<double> y = s.structural_values();
    sol.x.resize(n);
    sol.objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sol.x[i] = y[i] + lo[i];
        if (hi[i] < kInfUpper) sol.x[i] = std::min(sol.x[i], hi[i]);
        sol.x[i] = std::max(sol.x[i], lo[i]);
        sol.objective += p.c[i] * sol.x[i];
    }
    return sol;
}

}  // namespace lrp
