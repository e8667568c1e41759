#pragma once

#include "batsnum/scenario.hpp"
#include "batsnum/solution.hpp"

namespace batsnum {

// Projected-gradient refinement of adaptive policies under dual pricing,
// started from `init` (normally the two-step solution), followed by a
// fixed-policy solve. Gradient ascent is local: the result is never worse
// than `init` re-solved with its own policies fixed, and falls back to that
// when the iterates degrade or break down.
Solution primal_dual_adaptive(const Instance& instance, const Solution& init);

}  // namespace batsnum
