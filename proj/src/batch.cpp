#include "lrp/batch.hpp"

#include <exception>

#include "lrp/fleet.hpp"

namespace lrp {

namespace {

// Exceptions must not escape a parallel region; the first one is kept and
// rethrown after the loop.
template <typename Fn>
void parallel_items(std::size_t count, ExecutionMode mode, Fn&& fn) {
    if (mode == ExecutionMode::serial) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr err = nullptr;
    const long n = static_cast<long>(count);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace

std::vector<OptimizerResult> batch_optimize(const LrpSchedule& schedule,
                                            const std::vector<CustomerSpec>& specs,
                                            ExecutionMode mode) {
    std::vector<OptimizerResult> out(specs.size());
    parallel_items(specs.size(), mode, [&](std::size_t i) { out[i] = optimize(schedule, specs[i]); });
    return out;
}

std::vector<std::vector<double>> batch_voltages(const Feeder& f,
                                                const std::vector<std::vector<double>>& ev_kwh,
                                                std::size_t n_periods, double period_hours,
                                                ExecutionMode mode) {
    std::vector<std::vector<double>> out(n_periods);
    parallel_items(n_periods, mode,
                   [&](std::size_t t) { out[t] = period_voltages_sq(f, ev_kwh, t, period_hours); });
    return out;
}

}  // namespace lrp
