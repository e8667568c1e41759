#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "batsnum/ffmat.hpp"
#include "batsnum/linalg.hpp"
#include "batsnum/loss.hpp"
#include "batsnum/policy.hpp"

namespace batsnum {

// Probability that a uniformly random i x k matrix over GF(q) has rank j.
double zeta(int i, int k, int j, int q);

// zeta for all i <= max_i, k <= max_k with a fixed q.
class ZetaTable {
 public:
  ZetaTable(int q, int max_i, int max_k);
  double operator()(int i, int k, int j) const;
  int q() const { return q_; }

 private:
  int q_, max_i_, max_k_, width_;
  std::vector<double> table_;
};

// Per-link one-hop kernel K_m[i][j] = sum_{k=j}^{m} q(k|m) zeta^{i,k}_j for
// ranks i, j <= M and transmit counts m <= m_cap.
class HopKernel {
 public:
  HopKernel() = default;
  HopKernel(const BatchLossModel& model, int q, int M, int m_cap);

  int M() const { return M_; }
  int m_cap() const { return m_cap_; }
  int q() const { return q_; }

  double at(int m, int i, int j) const {
    return data_[(static_cast<std::size_t>(m) * stride_ + static_cast<std::size_t>(i)) * stride_ +
                 static_cast<std::size_t>(j)];
  }
  const double* row_ptr(int m, int i) const {
    return data_.data() + (static_cast<std::size_t>(m) * stride_ + static_cast<std::size_t>(i)) * stride_;
  }
  // E_r(t): expected next-hop rank of a rank-r batch when t packets are sent.
  double expected_rank(int r, int t) const {
    return expected_[static_cast<std::size_t>(t) * stride_ + static_cast<std::size_t>(r)];
  }
  // Transition matrix of nonadaptive recoding with m packets.
  Matrix nonadaptive_matrix(int m) const;

 private:
  int M_ = 0, m_cap_ = 0, q_ = 0;
  std::size_t stride_ = 0;
  std::vector<double> data_;
  std::vector<double> expected_;
};

// E_r(t) = sum_k q(k|t) sum_j j zeta^{r,k}_j.
double expected_rank_after_hop(int r, int t, const BatchLossModel& model, int q);

using RankDistribution = RowVector;

RankDistribution point_mass(int M, int r);
double expected_rank(const RankDistribution& h);

// P[i,j] = sum_m p(m|i) K_m[i][j]. Throws ParameterError when the policy
// support exceeds the kernel.
Matrix transition_matrix(const RecodingPolicy& policy, const HopKernel& kernel);
Matrix transition_matrix(const RecodingPolicy& policy, const BatchLossModel& model,
                         int q, int M);

// Monte Carlo transition matrix for systematic recoding: the received
// independent packets go out first, random combinations fill the rest, and
// the transmit order is a uniform permutation.
Matrix systematic_transition_matrix(const RecodingPolicy& policy,
                                    const BatchLossModel& model, Field field, int M,
                                    int samples, std::uint64_t seed);

struct Propagation {
  RankDistribution h;
  double expected_rank;
};
Propagation propagate(const RankDistribution& h0, const std::vector<Matrix>& path);

// d E[h_L] / d p_l(m|r), shape (M+1) x cols. `path` holds P_1..P_L and
// `kernel` is hop l's kernel (l is zero based).
Matrix gradient_expected_rank(const RankDistribution& h0, const std::vector<Matrix>& path,
                              std::size_t l, const HopKernel& kernel, int cols);

// min{M, min_e mbar_e (1 - eps_e)}.
double cutset_bound(double M, const std::vector<std::pair<double, double>>& per_edge);

// E[h_L] for nonadaptive recoding numbers m[l] on the hops whose kernels are
// given, starting from the point mass at M.
double path_expected_rank(const std::vector<const HopKernel*>& kernels,
                          const std::vector<int>& m);

}  // namespace batsnum
