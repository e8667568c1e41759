#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "batsnum/errors.hpp"
#include "batsnum/loss.hpp"
#include "batsnum/rankcalc.hpp"
#include "batsnum/recoding.hpp"

namespace batsnum {
namespace {

RankDistribution dist(std::initializer_list<double> v) {
  RankDistribution h(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) h(i++) = x;
  return h;
}

// Best value of sum_r h(r) E_r(t_r) over almost-deterministic policies with
// sum_r h(r) t_r <= budget. The objective is separable and piecewise linear,
// so some optimum has at most one fractional rank: try every integer base
// and every choice of that rank.
double exhaustive_hop_optimum(const RankDistribution& h, const std::vector<std::vector<double>>& E,
                              int M0, double budget) {
  const int M = static_cast<int>(h.size()) - 1;
  double best = 0.0;
  std::vector<int> t(static_cast<std::size_t>(M) + 1, 0);
  std::function<void(int)> rec = [&](int r) {
    if (r > M) {
      double cost = 0.0, value = 0.0;
      for (int k = 1; k <= M; ++k) {
        cost += h(k) * t[static_cast<std::size_t>(k)];
        value += h(k) * E[static_cast<std::size_t>(k)][static_cast<std::size_t>(t[static_cast<std::size_t>(k)])];
      }
      if (cost > budget + 1e-12) return;
      best = std::max(best, value);
      for (int k = 1; k <= M; ++k) {
        const int tk = t[static_cast<std::size_t>(k)];
        if (tk >= M0 || h(k) <= 0.0) continue;
        const double f = std::min(1.0, (budget - cost) / h(k));
        const auto& Ek = E[static_cast<std::size_t>(k)];
        best = std::max(best, value + h(k) * f * (Ek[static_cast<std::size_t>(tk) + 1] - Ek[static_cast<std::size_t>(tk)]));
      }
      return;
    }
    for (int v = 0; v <= M0; ++v) {
      t[static_cast<std::size_t>(r)] = v;
      rec(r + 1);
    }
    t[static_cast<std::size_t>(r)] = 0;
  };
  rec(1);
  return best;
}

class HopOptimumTest : public ::testing::TestWithParam<int> {};

TEST_P(HopOptimumTest, MatchesExhaustiveSearch) {
  const int M = 4, M0 = 12, q = 256;
  const BatchLossModel model = GetParam() == 0 ? independent_loss_model(0.2, M0)
                                               : ge_exact_loss_model(ge_preset_for_loss(0.2), M0);
  const HopKernel kernel(model, q, M, M0);
  std::vector<std::vector<double>> E(M + 1, std::vector<double>(M0 + 1));
  for (int r = 0; r <= M; ++r)
    for (int t = 0; t <= M0; ++t) E[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)] = expected_rank_after_hop(r, t, model, q);

  const RankDistribution h = dist({0.05, 0.1, 0.15, 0.3, 0.4});
  for (double budget : {0.0, 1.7, 4.0, 5.3, 8.25, 11.0}) {
    const HopOptimum opt = optimize_hop(h, kernel, budget);
    ASSERT_FALSE(opt.concavity_warning);
    EXPECT_NEAR(opt.expected_rank, exhaustive_hop_optimum(h, E, M0, budget), 1e-9) << budget;
    EXPECT_NEAR(average_packets(opt.policy, h), budget, 1e-12);
    EXPECT_TRUE(is_almost_deterministic(opt.policy));
    EXPECT_TRUE(opt.policy.idle_at_rank_zero());
  }
}

INSTANTIATE_TEST_SUITE_P(LossFamilies, HopOptimumTest, ::testing::Values(0, 1));

TEST(HopOptimum, SaturatedBudgetIsReported) {
  const int M = 4, M0 = 12;
  const HopKernel kernel(independent_loss_model(0.2, M0), 256, M, M0);
  const RankDistribution h = dist({0.05, 0.1, 0.15, 0.3, 0.4});
  const HopOptimum opt = optimize_hop(h, kernel, 20.0);
  EXPECT_NEAR(opt.unused_budget, 20.0 - 0.95 * M0, 1e-12);
  for (int r = 1; r <= M; ++r) EXPECT_DOUBLE_EQ(opt.t[static_cast<std::size_t>(r)], M0);
}

TEST(HopOptimum, RejectsBadInput) {
  const HopKernel kernel(independent_loss_model(0.2, 8), 256, 4, 8);
  EXPECT_THROW(optimize_hop(dist({0.5, 0.5}), kernel, 1.0), ParameterError);
  EXPECT_THROW(optimize_hop(dist({0.2, 0.2, 0.2, 0.2, 0.2}), kernel, -1.0), ParameterError);
}

TEST(HopOptimum, SkipsRanksWithoutMass) {
  const HopKernel kernel(independent_loss_model(0.2, 10), 256, 4, 10);
  const HopOptimum opt = optimize_hop(dist({0.0, 0.0, 0.0, 0.0, 1.0}), kernel, 5.5);
  EXPECT_DOUBLE_EQ(opt.t[4], 5.5);
  for (int r = 1; r < 4; ++r) EXPECT_DOUBLE_EQ(opt.t[static_cast<std::size_t>(r)], 0.0);
}

TEST(AlmostDeterministic, Expansion) {
  const RecodingPolicy p = expand_almost_deterministic({0.0, 2.3, 5.0}, 6);
  EXPECT_DOUBLE_EQ(p.prob(0, 0), 1.0);
  EXPECT_NEAR(p.prob(2, 1), 0.7, 1e-15);
  EXPECT_NEAR(p.prob(3, 1), 0.3, 1e-15);
  EXPECT_DOUBLE_EQ(p.prob(5, 2), 1.0);
  EXPECT_DOUBLE_EQ(p.prob(6, 2), 0.0);
  const auto t = mean_packets_per_rank(p, 2);
  EXPECT_NEAR(t[1], 2.3, 1e-15);
  EXPECT_NEAR(t[2], 5.0, 1e-15);
  EXPECT_TRUE(is_almost_deterministic(p));

  EXPECT_NO_THROW(expand_almost_deterministic({0.0, 6.0}, 6));
  EXPECT_THROW(expand_almost_deterministic({0.0, 6.5}, 6), ParameterError);
  EXPECT_THROW(expand_almost_deterministic({0.0, -0.1}, 6), ParameterError);
}

TEST(AlmostDeterministic, DetectsWiderSupport) {
  Matrix m = Matrix::Zero(2, 5);
  m(0, 0) = 1.0;
  m(1, 1) = 0.5;
  m(1, 3) = 0.5;
  EXPECT_FALSE(is_almost_deterministic(RecodingPolicy::adaptive(m)));
}

TEST(AveragePackets, ValueAndGradient) {
  const RecodingPolicy p = expand_almost_deterministic({0.0, 2.5, 4.0}, 6);
  const RankDistribution h = dist({0.2, 0.3, 0.5});
  EXPECT_NEAR(average_packets(p, h), 0.3 * 2.5 + 0.5 * 4.0, 1e-15);
  const Matrix g = average_packets_gradient(h, 7);
  for (int r = 0; r <= 2; ++r)
    for (int m = 0; m < 7; ++m) EXPECT_DOUBLE_EQ(g(r, m), m * h(r));
  EXPECT_DOUBLE_EQ(average_packets(RecodingPolicy::nonadaptive(3), h), 3.0);
}

TEST(Projection, OntoSimplexIsNearest) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  std::gamma_distribution<double> g(1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(6);
    for (double& x : v) x = n(rng);
    const auto p = project_simplex(v);
    double sum = 0.0;
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      sum += x;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    auto dist2 = [&](const std::vector<double>& y) {
      double d = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) d += (v[i] - y[i]) * (v[i] - y[i]);
      return d;
    };
    const double dp = dist2(p);
    for (int k = 0; k < 20; ++k) {
      std::vector<double> y(6);
      double s = 0.0;
      for (double& x : y) s += (x = g(rng));
      for (double& x : y) x /= s;
      EXPECT_LE(dp, dist2(y) + 1e-12);
    }
  }
}

TEST(Projection, FixedPointOnSimplex) {
  const std::vector<double> v{0.1, 0.2, 0.7};
  const auto p = project_simplex(v);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(p[i], v[i], 1e-15);
}

TEST(Projection, StochasticRowsAndRankZero) {
  Matrix a(3, 4);
  a << 0.3, 0.3, 0.2, 0.2,
       -1.0, 2.0, 0.5, 0.0,
       0.25, 0.25, 0.25, 0.25;
  const Matrix p = project_stochastic(a);
  EXPECT_DOUBLE_EQ(p(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(p.row(0).sum(), 1.0);
  for (int r = 1; r < 3; ++r) {
    EXPECT_NEAR(p.row(r).sum(), 1.0, 1e-12);
    EXPECT_GE(p.row(r).minCoeff(), 0.0);
  }
  EXPECT_NEAR(p(2, 3), 0.25, 1e-15);
}

}  // namespace
}  // namespace batsnum
