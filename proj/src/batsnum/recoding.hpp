#pragma once

#include <vector>

#include "batsnum/linalg.hpp"
#include "batsnum/policy.hpp"
#include "batsnum/rankcalc.hpp"

namespace batsnum {

// mbar = sum_r sum_m m p(m|r) h(r).
double average_packets(const RecodingPolicy& policy, const RankDistribution& h);
// d mbar / d p(m|r) = m h(r), shape (M+1) x cols.
Matrix average_packets_gradient(const RankDistribution& h, int cols);

// p(floor t|r) = 1 - frac t, p(floor t + 1|r) = frac t. Throws
// ParameterError when some t(r) is negative or exceeds M0.
RecodingPolicy expand_almost_deterministic(const std::vector<double>& t, int M0);
// Inverse of the expansion for policies with two-point consecutive support;
// returns the mean count per rank.
std::vector<double> mean_packets_per_rank(const RecodingPolicy& policy, int M);
bool is_almost_deterministic(const RecodingPolicy& policy, double tol = 1e-12);

struct HopOptimum {
  RecodingPolicy policy;
  std::vector<double> t;        // per-rank mean transmit count
  double expected_rank = 0.0;   // E[h_out]
  double unused_budget = 0.0;   // budget left when every funded rank hit M0
  bool concavity_warning = false;
};

// Maximizes E[h_in P] subject to average_packets <= budget by greedy
// marginal allocation over ranks (optimal when E_r(t) is concave in t).
// Kernel m_cap is the support cap M0.
HopOptimum optimize_hop(const RankDistribution& h_in, const HopKernel& kernel, double budget,
                        bool check_concavity = true);

// Euclidean projection of each row onto the probability simplex; row 0 is
// forced to the point mass at 0.
Matrix project_stochastic(const Matrix& a);
// Projection of one vector onto the probability simplex.
std::vector<double> project_simplex(const std::vector<double>& v);

}  // namespace batsnum
