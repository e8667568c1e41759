#pragma once

#include <string>
#include <vector>

#include "batsnum/netmodel.hpp"
#include "batsnum/policy.hpp"

namespace batsnum {

enum class SolveStatus { converged, iteration_cap, reverted };

const char* to_string(SolveStatus s);

struct FlowSolution {
  std::string name;
  double alpha = 0.0;  // batches per slot
  double eta = 1.0;    // two-step rate multiplier (1 elsewhere)
  std::vector<RecodingPolicy> policies;  // one per hop
  std::vector<double> mbar;              // average packets per batch, per hop
  double expected_rank = 0.0;            // analytic E[h] at the sink
  double utility = 0.0;                  // log(alpha * E[h])
  double upper_utility = 0.0;            // per-flow value of the bound problem
  double cutset = 0.0;                   // cut-set bound on E[h]
};

struct Solution {
  std::string mode;  // nap, two-step, up, pd
  std::string scenario;
  std::vector<FlowSolution> flows;
  std::vector<double> rate;         // s_e
  Decomposition schedule;           // time shares realizing `rate`
  std::vector<double> multipliers;  // final lambda_e
  double utility = 0.0;
  double upper_bound = 0.0;
  double kappa = 0.0;
  SolveStatus status = SolveStatus::converged;
  int iterations = 0;
  std::vector<std::string> warnings;
};

// kappa = exp((U - U_tilde) / k).
double utility_ratio(double U_total, double U_tilde_total, std::size_t k);

// Sets upper_bound, per-flow upper utilities and kappa from a bound solution.
void attach_upper_bound(Solution& sol, const Solution& bound);

}  // namespace batsnum
