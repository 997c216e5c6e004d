#pragma once

#include "hawkesdp/model.hpp"
#include "hawkesdp/rng.hpp"

namespace hawkesdp {

// Ogata thinning with a piecewise-constant envelope recomputed after every
// candidate. Exponential kernels contribute their current value to the
// envelope, box kernels their height until the box can no longer activate.
// Rejects non-stationary models; deterministic given the rng seed.
EventStream simulate(const HawkesModel& model, double horizon, Rng& rng);

}  // namespace hawkesdp
