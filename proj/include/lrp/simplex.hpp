#pragma once

#include <cstddef>
#include <vector>

namespace lrp {

// Dense linear program: minimize c.x subject to row constraints and variable
// bounds. Lower bounds must be finite; upper bounds may be +infinity.
struct LpRow {
    std::vector<double> a;
    double rhs = 0.0;
    char type = 'L';  // 'L' a.x <= rhs, 'E' a.x == rhs, 'G' a.x >= rhs
};

struct LpProblem {
    std::vector<double> c;
    std::vector<double> lo;  // empty means all zero
    std::vector<double> hi;  // empty means all +infinity
    std::vector<LpRow> rows;

    std::size_t n_vars() const { return c.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
    LpStatus status = LpStatus::iteration_limit;
    std::vector<double> x;       // original coordinates; valid when optimal
    double objective = 0.0;
    int iterations = 0;          // simplex pivots across both phases
};

// Two-phase primal simplex on the standard-form conversion (shift to zero
// lower bounds, slack per inequality, explicit upper-bound rows, artificials
// for the phase-one start). Bland's rule throughout, so it terminates.
LpSolution solve_lp(const LpProblem& p, int max_iterations = 50000);

}  // namespace lrp
