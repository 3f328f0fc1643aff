#pragma once

// Test-only reference simulator. It shares the circuit IR but none of the
// production kernels: every gate expands to a full dim x dim matrix applied by
// matrix-vector multiplication, and measurement branches are walked with its
// own projection code. Slow and simple on purpose.

#include <vector>

#include "hhlsim/circuit.hpp"
#include "hhlsim/metrics.hpp"

namespace refsim {

hhlsim::OutcomeDistribution exact_distribution(const hhlsim::Circuit& c,
                                               const std::vector<int>& initial_levels);

}  // namespace refsim
