#pragma once

#include <vector>

#include "batsnum/recoding.hpp"
#include "batsnum/scenario.hpp"
#include "batsnum/solution.hpp"

namespace batsnum {

// Hop-by-hop adaptive reallocation of one flow for a given eta: hop l gets
// budget m_l / eta and is optimized for the rank distribution arriving at it.
struct AdaptivePath {
  std::vector<RecodingPolicy> policies;
  std::vector<double> mbar;
  double expected_rank = 0.0;  // R(eta)
};
AdaptivePath adaptive_path(const Instance& instance, std::size_t flow, const std::vector<double>& budgets,
                           double eta);

// Step 1 solves the nonadaptive problem; step 2 picks, per flow, the eta in
// the configured grid (refined by golden section) maximizing eta alpha R(eta)
// and keeps the step-1 rate vector.
Solution two_step_solve(const Instance& instance);
Solution two_step_from(const Instance& instance, const Solution& nap);

}  // namespace batsnum
