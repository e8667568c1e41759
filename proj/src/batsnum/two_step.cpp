#include "batsnum/two_step.hpp"

#include <cmath>

#include "batsnum/errors.hpp"
#include "batsnum/solvers.hpp"

namespace batsnum {

AdaptivePath adaptive_path(const Instance& instance, std::size_t flow, const std::vector<double>& budgets,
                           double eta) {
  const Flow& f = instance.flows()[flow];
  if (budgets.size() != f.links.size()) throw ParameterError("one budget per hop required");
  if (!(eta > 0.0)) throw ParameterError("eta must be positive");
  AdaptivePath out;
  RankDistribution h = point_mass(f.M, f.M);
  for (std::size_t l = 0; l < f.links.size(); ++l) {
    const HopKernel& k = instance.kernel(flow, l);
    HopOptimum opt = optimize_hop(h, k, budgets[l] / eta, false);
    out.mbar.push_back(average_packets(opt.policy, h));
    h = h * transition_matrix(opt.policy, k);
    out.policies.push_back(std::move(opt.policy));
  }
  out.expected_rank = expected_rank(h);
  return out;
}

namespace {

struct EtaChoice {
  double eta = 1.0;
  double value = -1.0;  // eta * R(eta)
};

EtaChoice tune_eta(const Instance& instance, std::size_t flow, const std::vector<double>& budgets) {
  const SolverOptions& opt = instance.scenario().solver;
  auto value = [&](double eta) { return eta * adaptive_path(instance, flow, budgets, eta).expected_rank; };
  const int steps = static_cast<int>(std::floor((opt.eta_max - opt.eta_min) / opt.eta_step + 1e-9));
  EtaChoice best;
  int best_k = 0;
  for (int k = 0; k <= steps; ++k) {
    const double eta = opt.eta_min + k * opt.eta_step;
    const double v = value(eta);
    if (v > best.value) {
      best = {eta, v};
      best_k = k;
    }
  }
  // Golden-section refinement between the neighbouring grid points.
  double lo = opt.eta_min + std::max(0, best_k - 1) * opt.eta_step;
  double hi = opt.eta_min + std::min(steps, best_k + 1) * opt.eta_step;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = value(x1), f2 = value(x2);
  while (hi - lo > opt.eta_tolerance) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = value(x2);
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double fm = value(mid);
  if (fm > best.value) best = {mid, fm};
  return best;
}

}  // namespace

Solution two_step_from(const Instance& instance, const Solution& nap) {
  Solution sol = nap;
  sol.mode = "two-step";
  sol.utility = 0.0;
  for (std::size_t i = 0; i < sol.flows.size(); ++i) {
    FlowSolution& fs = sol.flows[i];
    std::vector<double> budgets;
    for (const auto& p : fs.policies) {
      if (!p.is_nonadaptive()) throw ParameterError("two-step needs a nonadaptive first step");
      budgets.push_back(p.m());
    }
    const EtaChoice choice = tune_eta(instance, i, budgets);
    AdaptivePath path = adaptive_path(instance, i, budgets, choice.eta);
    fs.eta = choice.eta;
    fs.alpha = nap.flows[i].alpha * choice.eta;
    fs.policies = std::move(path.policies);
    fs.mbar = std::move(path.mbar);
    fs.expected_rank = path.expected_rank;
    fs.utility = std::log(fs.alpha * fs.expected_rank);
    std::vector<std::pair<double, double>> edges;
    const Flow& f = instance.flows()[i];
    for (std::size_t l = 0; l < f.links.size(); ++l)
      edges.emplace_back(fs.mbar[l], instance.loss_rate(f.links[l]));
    fs.cutset = cutset_bound(f.M, edges);
    sol.utility += fs.utility;
  }
  if (sol.upper_bound != 0.0) sol.kappa = utility_ratio(sol.utility, sol.upper_bound, sol.flows.size());
  return sol;
}

Solution two_step_solve(const Instance& instance) { return two_step_from(instance, solve_nap(instance)); }

}  // namespace batsnum
