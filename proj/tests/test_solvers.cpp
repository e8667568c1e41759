#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "batsnum/errors.hpp"
#include "batsnum/fixed_policy.hpp"
#include "batsnum/primal_dual.hpp"
#include "batsnum/rankcalc.hpp"
#include "batsnum/solvers.hpp"
#include "batsnum/two_step.hpp"

namespace batsnum {
namespace {

// A line v0 - v1 - ... with the given per-link loss rates and capacities.
Scenario line_scenario(const std::vector<double>& eps, const std::vector<double>& cap,
                       InterferenceKind kind, std::vector<Flow> flows, int m0_factor = 10) {
  Scenario s;
  s.name = "line";
  for (std::size_t v = 0; v <= eps.size(); ++v) s.network.nodes.push_back("v" + std::to_string(v));
  for (std::size_t e = 0; e < eps.size(); ++e)
    s.network.links.push_back(Link{"e" + std::to_string(e), static_cast<int>(e), static_cast<int>(e) + 1,
                                   cap[e], LossSpec::independent(eps[e])});
  s.interference = kind;
  s.apply_interference();
  s.flows = std::move(flows);
  s.m0_factor = m0_factor;
  return s;
}

TEST(UpperBound, SingleLink) {
  const Instance inst(line_scenario({0.2}, {1.0}, InterferenceKind::two_hop, {Flow{"f", {0}, 4}}));
  const Solution up = solve_up(inst);
  EXPECT_NEAR(up.utility, std::log(0.8), 1e-9);
  EXPECT_NEAR(up.flows[0].alpha, 0.8, 1e-9);
}

TEST(UpperBound, PresetValues) {
  // Reference optima of the bound problem from an external conic solver.
  const std::vector<std::pair<std::string, double>> ref{
      {"case1", -4.029806007698405}, {"case2", -2.6435116991545806}, {"case4", -5.215429705943848}};
  for (const auto& [name, value] : ref) {
    const Instance inst(preset_scenario(name, LossFamily::iid));
    EXPECT_NEAR(solve_up(inst).utility, value, 1e-6) << name;
  }
}

TEST(UpperBound, DoublingCapacityDoublesRates) {
  Scenario s = preset_scenario("case1", LossFamily::iid);
  const Solution base = solve_up(Instance(s));
  for (auto& l : s.network.links) l.capacity *= 2.0;
  const Solution doubled = solve_up(Instance(s));
  for (std::size_t i = 0; i < base.flows.size(); ++i)
    EXPECT_NEAR(doubled.flows[i].alpha, 2.0 * base.flows[i].alpha, 1e-7);
}

TEST(FixedPolicy, SharedLinkSplitsEvenly) {
  Network n;
  n.nodes = {"a", "b"};
  n.links = {Link{"l", 0, 1, 3.0, {}}};
  n.interference = {{}};
  FixedPolicyProblem p;
  p.load = {{{0, 1.0}}, {{0, 1.0}}};
  p.gain = {1.0, 1.0};
  for (FixedPolicyMethod method : {FixedPolicyMethod::barrier, FixedPolicyMethod::subgradient}) {
    SolverOptions opt;
    opt.fixed_method = method;
    // The subgradient loop only reaches the optimum asymptotically.
    const double tol = method == FixedPolicyMethod::barrier ? 1e-7 : 1e-2;
    const auto r = solve_fixed_policy(n, enumerate_feasible_schedules(n), p, opt);
    EXPECT_NEAR(r.alpha[0], 1.5, tol);
    EXPECT_NEAR(r.alpha[1], 1.5, tol);
    EXPECT_NEAR(r.objective, 2 * std::log(1.5), tol);
    EXPECT_LE(r.alpha[0] + r.alpha[1], 3.0 + 1e-9);
  }
}

TEST(FixedPolicy, WeightedLoadsOnConflictingLinks) {
  // Two conflicting links, flow i loads link i with a_i: the optimum gives
  // each link half the time, alpha_i = c_i / (2 a_i).
  Network n;
  n.nodes = {"a", "b", "c"};
  n.links = {Link{"x", 0, 1, 2.0, {}}, Link{"y", 1, 2, 1.0, {}}};
  n.interference = {{1}, {0}};
  FixedPolicyProblem p;
  p.load = {{{0, 4.0}}, {{1, 0.5}}};
  p.gain = {2.0, 3.0};
  const auto r = solve_fixed_policy(n, enumerate_feasible_schedules(n), p, SolverOptions{});
  EXPECT_NEAR(r.alpha[0], 0.25, 1e-7);
  EXPECT_NEAR(r.alpha[1], 1.0, 1e-7);
  EXPECT_NEAR(r.objective, std::log(0.5) + std::log(3.0), 1e-7);
  EXPECT_LE(r.gap, 1e-6);
}

TEST(FixedPolicy, BarrierAndSubgradientAgree) {
  const Instance inst(preset_scenario("case4", LossFamily::iid));
  std::vector<std::vector<RecodingPolicy>> pol;
  for (std::size_t i = 0; i < inst.flows().size(); ++i)
    pol.emplace_back(inst.flows()[i].links.size(), RecodingPolicy::nonadaptive(20));
  const Solution a = solve_fixed_policies(inst, pol, "nap");
  Scenario s = inst.scenario();
  s.solver.fixed_method = FixedPolicyMethod::subgradient;
  const Solution b = solve_fixed_policies(Instance(s), pol, "nap");
  EXPECT_NEAR(a.utility, b.utility, 5e-2);
  EXPECT_GE(a.utility, b.utility - 1e-9);
  EXPECT_NO_THROW(check_feasible(inst.scenario(), a));
  EXPECT_NO_THROW(check_feasible(inst.scenario(), b));
}

TEST(FixedPolicy, CheckFeasibleReportsExcess) {
  const Instance inst(preset_scenario("case1", LossFamily::iid));
  std::vector<std::vector<RecodingPolicy>> pol;
  for (const Flow& f : inst.flows()) pol.emplace_back(f.links.size(), RecodingPolicy::nonadaptive(20));
  Solution sol = solve_fixed_policies(inst, pol, "nap");
  sol.flows[0].alpha *= 1.5;
  try {
    check_feasible(inst.scenario(), sol);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& err) {
    const auto& excess = err.certificate();
    ASSERT_EQ(excess.size(), 8u);
    EXPECT_GT(*std::max_element(excess.begin(), excess.begin() + 5), 0.0);
    for (std::size_t e = 5; e < 8; ++e) EXPECT_LE(excess[e], 1e-12);
  }
}

TEST(LocalSearch, NeighbourhoodEscapesCoordinateStall) {
  // Two hops, eps = 0.2, unit-half prices: from (5,5) no single-coordinate
  // move helps, but the diagonal move to (6,6) does.
  const auto model = independent_loss_model(0.2, 160);
  const HopKernel k(model, 256, 16, 160);
  const std::vector<double> lambda{0.5, 0.5}, cap{1.0, 1.0};

  PathRankCache c1({&k, &k});
  const auto coord = flow_subproblem_coordinate_search(c1, lambda, {5, 5});
  EXPECT_EQ(coord.m, (std::vector<int>{5, 5}));

  PathRankCache c2({&k, &k});
  const auto nbhd = flow_subproblem_local_search(c2, lambda, cap, {5, 5}, 1e-12);
  EXPECT_GT(nbhd.objective, coord.objective);
  EXPECT_GE(nbhd.m[0], 6);
  EXPECT_GE(nbhd.objective, path_expected_rank({&k, &k}, {6, 6}) / 6.0 - 1e-12);
}

TEST(LocalSearch, ObjectiveIsLocallyOptimal) {
  const auto model = independent_loss_model(0.1, 160);
  const HopKernel k(model, 256, 16, 160);
  const std::vector<double> lambda{0.3, 0.7, 0.5}, cap{1.0, 1.0, 1.0};
  PathRankCache cache({&k, &k, &k});
  const auto r = flow_subproblem_local_search(cache, lambda, cap, {16, 16, 16}, 0.0);
  auto obj = [&](const std::vector<int>& m) {
    double d = 0.0;
    for (std::size_t l = 0; l < 3; ++l) d += lambda[l] * m[l];
    return path_expected_rank({&k, &k, &k}, m) / d;
  };
  EXPECT_NEAR(r.objective, obj(r.m), 1e-14);
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c) {
        const std::vector<int> m{r.m[0] + a, r.m[1] + b, r.m[2] + c};
        if (m[0] < 1 || m[1] < 1 || m[2] < 1) continue;
        EXPECT_LE(obj(m), r.objective + 1e-15);
      }
  EXPECT_NEAR(r.alpha, 1.0 / (0.3 * r.m[0] + 0.7 * r.m[1] + 0.5 * r.m[2]), 1e-15);
}

TEST(LocalSearch, RejectsNegativeMultipliers) {
  const HopKernel k(independent_loss_model(0.1, 40), 256, 4, 40);
  PathRankCache cache({&k});
  EXPECT_THROW(flow_subproblem_local_search(cache, {-1.0}, {1.0}, {4}, 0.0), ParameterError);
}

TEST(Nap, SingleFlowNoCollisionMatchesExhaustive) {
  const Instance inst(line_scenario({0.2, 0.1, 0.2}, {1.0, 1.0, 1.0}, InterferenceKind::none,
                                    {Flow{"f", {0, 1, 2}, 8}}));
  const Solution nap = solve_nap(inst);
  const auto best = solve_single_flow_no_collision(inst.path_kernels(0), 1.0);
  EXPECT_NEAR(nap.utility, std::log(best.throughput), 1e-6);
  EXPECT_NO_THROW(check_feasible(inst.scenario(), nap));
}

TEST(Nap, SingleFlowAllCollisionMatchesExhaustive) {
  const Instance inst(line_scenario({0.2, 0.1}, {1.0, 1.0}, InterferenceKind::all,
                                    {Flow{"f", {0, 1}, 4}}));
  const auto kernels = inst.path_kernels(0);
  double best = 0.0;
  for (int a = 1; a <= 40; ++a)
    for (int b = 1; b <= 40; ++b) best = std::max(best, path_expected_rank(kernels, {a, b}) / (a + b));
  const Solution nap = solve_nap(inst);
  EXPECT_NEAR(nap.utility, std::log(best), 1e-6);
  const auto all = solve_single_flow_all_collision(kernels, 1.0, {4, 4});
  EXPECT_NEAR(all.throughput, best, 1e-12);
}

TEST(Nap, TwoFlowLineIsFeasibleAndBelowBound) {
  const Instance inst(line_scenario({0.2, 0.1, 0.2, 0.2}, {1.0, 2.0, 1.0, 1.0}, InterferenceKind::two_hop,
                                    {Flow{"a", {0, 1, 2}, 8}, Flow{"b", {1, 2, 3}, 8}}));
  const Solution nap = solve_nap(inst);
  const Solution up = solve_up(inst);
  EXPECT_NO_THROW(check_feasible(inst.scenario(), nap));
  EXPECT_LT(nap.utility, up.utility);
  double total = 0.0;
  for (const auto& [s, share] : nap.schedule) total += share;
  EXPECT_LE(total, 1.0 + 1e-9);
  for (const auto& f : nap.flows) {
    EXPECT_LE(f.expected_rank, f.cutset + 1e-12);
    for (const auto& p : f.policies) EXPECT_TRUE(p.is_nonadaptive());
  }
}

TEST(TwoStep, ImprovesOnNonadaptive) {
  const Instance inst(line_scenario({0.2, 0.1, 0.2, 0.2}, {1.0, 2.0, 1.0, 1.0}, InterferenceKind::two_hop,
                                    {Flow{"a", {0, 1, 2}, 8}, Flow{"b", {1, 2, 3}, 8}}));
  const Solution nap = solve_nap(inst);
  const Solution ts = two_step_from(inst, nap);
  EXPECT_GE(ts.utility, nap.utility - 1e-12);
  EXPECT_EQ(ts.rate, nap.rate);
  EXPECT_NO_THROW(check_feasible(inst.scenario(), ts));
  for (const auto& f : ts.flows) {
    EXPECT_GE(f.eta, 1.0);
    EXPECT_LE(f.eta, 3.0);
  }
}

TEST(TwoStep, AdaptiveLastHopBeatsNonadaptive) {
  // With eta = 1 the first hop sees a point mass and the last hop is
  // optimized exactly, so a two-hop path can only gain.
  const Instance inst(line_scenario({0.2, 0.2}, {1.0, 1.0}, InterferenceKind::two_hop,
                                    {Flow{"f", {0, 1}, 16}}));
  const std::vector<int> m{19, 21};
  const auto ap = adaptive_path(inst, 0, {19.0, 21.0}, 1.0);
  EXPECT_GE(ap.expected_rank, path_expected_rank(inst.path_kernels(0), m) - 1e-12);
  EXPECT_NEAR(ap.mbar[0], 19.0, 1e-12);
  EXPECT_NEAR(ap.mbar[1], 21.0, 1e-9);
}

TEST(PrimalDual, NeverWorseThanInitialization) {
  const Instance inst(line_scenario({0.2, 0.1, 0.2}, {1.0, 1.0, 1.0}, InterferenceKind::two_hop,
                                    {Flow{"a", {0, 1}, 4}, Flow{"b", {1, 2}, 4}}));
  const Solution ts = two_step_solve(inst);
  const Solution pd = primal_dual_adaptive(inst, ts);
  EXPECT_GE(pd.utility, ts.utility - 1e-9);
  EXPECT_NO_THROW(check_feasible(inst.scenario(), pd));
  if (pd.status == SolveStatus::reverted) EXPECT_FALSE(pd.warnings.empty());
}

TEST(Solution, UtilityRatio) {
  EXPECT_DOUBLE_EQ(utility_ratio(-4.0, -4.0, 2), 1.0);
  EXPECT_NEAR(utility_ratio(-4.0, -3.0, 2), std::exp(-0.5), 1e-15);
}

}  // namespace
}  // namespace batsnum
