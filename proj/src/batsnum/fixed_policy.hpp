#pragma once

#include <utility>
#include <vector>

#include "batsnum/netmodel.hpp"
#include "batsnum/policy.hpp"
#include "batsnum/scenario.hpp"
#include "batsnum/solution.hpp"

namespace batsnum {

// max sum_i log(alpha_i g_i)  s.t.  sum_i alpha_i a_ie <= s_e, s in Co(R).
struct FixedPolicyProblem {
  std::vector<std::vector<std::pair<int, double>>> load;  // per flow: (link, a_ie)
  std::vector<double> gain;                               // g_i > 0
};

struct FixedPolicyResult {
  std::vector<double> alpha;
  std::vector<double> rate;
  Decomposition schedule;
  std::vector<double> multipliers;
  double objective = 0.0;  // sum_i log(alpha_i g_i)
  double gap = 0.0;        // duality gap bound at exit
  int iterations = 0;
  bool converged = false;
};

// Interior point on the dual (log barrier over the schedule epigraph) or the
// projected subgradient loop with max-weight scheduling, per options. The
// returned (alpha, rate) is always feasible.
FixedPolicyResult solve_fixed_policy(const Network& network,
                                     const std::vector<Schedule>& schedules,
                                     const FixedPolicyProblem& problem,
                                     const SolverOptions& options);

// Builds the problem from per-flow, per-hop policies (analytic E[h] and mbar)
// and packs the result as a Solution.
Solution solve_fixed_policies(const Instance& instance,
                              const std::vector<std::vector<RecodingPolicy>>& policies,
                              const std::string& mode);

// Per-hop average packets and sink expected rank of one flow.
struct FlowEvaluation {
  std::vector<double> mbar;
  double expected_rank = 0.0;
};
FlowEvaluation evaluate_flow(const Instance& instance, std::size_t flow,
                             const std::vector<RecodingPolicy>& policies);

// Checks sum_i alpha_i mbar_e^i <= s_e + tol on every link and that `rate`
// is realized by the schedule (or lies in the rate region when no schedule
// is given). Throws InfeasibleError listing the per-link excess.
void check_feasible(const Scenario& scenario, const Solution& sol, double tol = 1e-9);

}  // namespace batsnum
