#pragma once

#include <cstddef>
#include <vector>

namespace lrp {

// Solution of a separable quadratic program with one coupling constraint:
//
//   minimize    sum_t a_t x_t^2 + b_t x_t
//   subject to  sum_t x_t = total,  lo_t <= x_t <= hi_t,  a_t >= 0.
//
// Stationarity gives 2 a_t x_t + b_t = lambda on the interior, so
// x_t(lambda) = clamp((lambda - b_t) / (2 a_t), lo_t, hi_t) and periods with
// a_t = 0 contribute a step at b_t. The map lambda -> sum_t x_t(lambda) is
// piecewise linear and nondecreasing; lambda is located by bisection over the
// sorted breakpoints and then solved in closed form on the final segment.
struct QpSolution {
    std::vector<double> x;
    double lambda = 0.0;  // multiplier of the coupling constraint
    int iterations = 0;   // breakpoint bisection steps
};

struct QpProblem {
    std::vector<double> a;   // quadratic coefficients, >= 0
    std::vector<double> b;   // linear coefficients
    std::vector<double> lo;  // lower bounds
    std::vector<double> hi;  // upper bounds
    double total = 0.0;      // coupling constraint right-hand side
};

// Throws std::invalid_argument on malformed input (NaN, a_t < 0, lo > hi) and
// std::runtime_error when total lies outside [sum lo, sum hi].
//
// Ties at a step (several a_t = 0 periods sharing b_t = lambda) are resolved by
// filling the earliest period index first, which makes the solution unique and
// matches a greedy fill when all a_t = 0.
QpSolution solve_separable_qp(const QpProblem& p);

}  // namespace lrp
