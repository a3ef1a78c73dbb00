#include "lrp/qp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lrp {

namespace {

// Sum of per-period responses at multiplier lambda. Periods with a_t = 0 step
// from lo to hi at b_t; at_step_hi selects which side of the step they take
// exactly at lambda == b_t, giving the one-sided limits of the map.
double response_sum(const QpProblem& p, double lambda, bool at_step_hi) {
    double s = 0.0;
    for (std::size_t t = 0; t < p.a.size(); ++t) {
        if (p.a[t] > 0.0) {
            double v = (lambda - p.b[t]) / (2.0 * p.a[t]);
            s += std::clamp(v, p.lo[t], p.hi[t]);
        } else if (lambda > p.b[t] || (at_step_hi && lambda == p.b[t])) {
            s += p.hi[t];
        } else {
            s += p.lo[t];
        }
    }
    return s;
}

}  // namespace

QpSolution solve_separable_qp(const QpProblem& p) {
    const std::size_t n = p.a.size();
    if (n == 0) throw std::invalid_argument("empty problem");
    if (p.b.size() != n || p.lo.size() != n || p.hi.size() != n) {
        throw std::invalid_argument("coefficient and bound vectors must have equal length");
    }
    if (!std::isfinite(p.total)) throw std::invalid_argument("total must be finite");
    double sum_lo = 0.0, sum_hi = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (!std::isfinite(p.a[t]) || !std::isfinite(p.b[t]) || !std::isfinite(p.lo[t]) ||
            !std::isfinite(p.hi[t])) {
            throw std::invalid_argument("inputs must be finite at period " + std::to_string(t));
        }
        if (p.a[t] < 0.0) {
            throw std::invalid_argument("quadratic coefficient negative at period " +
                                        std::to_string(t));
        }
        if (p.lo[t] > p.hi[t]) {
            throw std::invalid_argument("empty bound interval at period " + std::to_string(t));
        }
        sum_lo += p.lo[t];
        sum_hi += p.hi[t];
    }
    const double feas_tol = 1e-9 * std::max(1.0, std::fabs(p.total));
    if (p.total < sum_lo - feas_tol || p.total > sum_hi + feas_tol) {
        throw std::runtime_error("infeasible: total outside the reachable range [" +
                                 std::to_string(sum_lo) + ", " + std::to_string(sum_hi) + "]");
    }
    const double total = std::clamp(p.total, sum_lo, sum_hi);

    QpSolution sol;
    sol.x.resize(n);

    // Breakpoints of the piecewise-linear map; a_t = 0 contributes its step point.
    std::vector<double> bps;
    bps.reserve(2 * n);
    for (std::size_t t = 0; t < n; ++t) {
        if (p.a[t] > 0.0) {
            bps.push_back(p.b[t] + 2.0 * p.a[t] * p.lo[t]);
            bps.push_back(p.b[t] + 2.0 * p.a[t] * p.hi[t]);
        } else {
            bps.push_back(p.b[t]);
        }
    }
    std::sort(bps.begin(), bps.end());

    if (total <= sum_lo) {
        sol.x.assign(p.lo.begin(), p.lo.end());
        sol.lambda = bps.front();
        return sol;
    }
    if (total >= sum_hi) {
        sol.x.assign(p.hi.begin(), p.hi.end());
        sol.lambda = bps.back();
        return sol;
    }

    // Smallest breakpoint whose upper one-sided response reaches the target.
    // The map is nondecreasing, so this is a bisection over the sorted array.
    std::size_t lo_i = 0, hi_i = bps.size() - 1;
    while (lo_i < hi_i) {
        std::size_t mid = lo_i + (hi_i - lo_i) / 2;
        if (response_sum(p, bps[mid], true) >= total) {
            hi_i = mid;
        } else {
            lo_i = mid + 1;
        }
        ++sol.iterations;
    }
    const double lam_k = bps[lo_i];
    const double s_minus = response_sum(p, lam_k, false);

    auto assemble_at = [&](double lambda, bool at_step_hi) {
        for (std::size_t t = 0; t < n; ++t) {
            if (p.a[t] > 0.0) {
                double v = (lambda - p.b[t]) / (2.0 * p.a[t]);
                sol.x[t] = std::clamp(v, p.lo[t], p.hi[t]);
            } else if (lambda > p.b[t] || (at_step_hi && lambda == p.b[t])) {
                sol.x[t] = p.hi[t];
            } else {
                sol.x[t] = p.lo[t];
            }
        }
    };

    // Linear correction over periods strictly interior at the current lambda.
    // One pass is a Newton step on the linear segment; repeated passes shrink
    // the residual to roundoff even when a_t spans many orders of magnitude.
    auto correct_interior = [&](double& lambda) {
        for (int pass = 0; pass < 3; ++pass) {
            double slope = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                if (p.a[t] > 0.0 && sol.x[t] > p.lo[t] && sol.x[t] < p.hi[t]) {
                    slope += 1.0 / (2.0 * p.a[t]);
                }
            }
            if (slope <= 0.0) return;
            double r = total - std::accumulate(sol.x.begin(), sol.x.end(), 0.0);
            if (r == 0.0) return;
            double step = r / slope;
            for (std::size_t t = 0; t < n; ++t) {
                if (p.a[t] > 0.0 && sol.x[t] > p.lo[t] && sol.x[t] < p.hi[t]) {
                    sol.x[t] = std::clamp(sol.x[t] + step / (2.0 * p.a[t]), p.lo[t], p.hi[t]);
                }
            }
            lambda += step;
        }
    };

    if (s_minus > total) {
        // Target sits strictly inside the open segment below lam_k. Assembling
        // at the segment midpoint classifies every segment-interior period as
        // strictly inside its bounds, so the linear correction can reach the
        // exact solution. lo_i >= 1 here because the response at the smallest
        // breakpoint is sum_lo < total.
        const double prev = bps[lo_i - 1];
        const double mid = prev + 0.5 * (lam_k - prev);
        sol.lambda = mid;
        assemble_at(mid, false);
        correct_interior(sol.lambda);
    } else {
        // Target is met exactly at lam_k; distribute the jump across stepped
        // periods in ascending period order, earliest index first.
        sol.lambda = lam_k;
        assemble_at(lam_k, false);
        double r = total - std::accumulate(sol.x.begin(), sol.x.end(), 0.0);
        for (std::size_t t = 0; t < n && r > 0.0; ++t) {
            if (p.a[t] == 0.0 && p.b[t] == lam_k) {
                double d = std::min(p.hi[t] - p.lo[t], r);
                sol.x[t] = p.lo[t] + d;
                r -= d;
            }
        }
        correct_interior(sol.lambda);
    }

    double achieved = std::accumulate(sol.x.begin(), sol.x.end(), 0.0);
    if (std::fabs(achieved - total) > 1e-9 * std::max(1.0, std::fabs(total))) {
        throw std::runtime_error("energy balance not met after segment solve");
    }
    return sol;
}

}  // namespace lrp
