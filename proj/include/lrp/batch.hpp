#pragma once

#include <cstddef>
#include <vector>

#include "lrp/customer.hpp"
#include "lrp/feeder.hpp"
#include "lrp/tariff.hpp"

namespace lrp {

// Parallel kernels fan independent items across OpenMP threads; the serial
// mode runs the same arithmetic on one thread and is the reference the tests
// compare against. Results are identical in both modes.
enum class ExecutionMode { serial, parallel };

// One customer optimization per spec under a common schedule.
std::vector<OptimizerResult> batch_optimize(const LrpSchedule& schedule,
                                            const std::vector<CustomerSpec>& specs,
                                            ExecutionMode mode = ExecutionMode::parallel);

// Squared bus voltages for every period of a charging schedule.
std::vector<std::vector<double>> batch_voltages(const Feeder& f,
                                                const std::vector<std::vector<double>>& ev_kwh,
                                                std::size_t n_periods, double period_hours,
                                                ExecutionMode mode = ExecutionMode::parallel);

}  // namespace lrp
