#include "batsnum/primal_dual.hpp"

#include <algorithm>
#include <cmath>

#include "batsnum/errors.hpp"
#include "batsnum/fixed_policy.hpp"
#include "batsnum/recoding.hpp"

namespace batsnum {

Solution primal_dual_adaptive(const Instance& instance, const Solution& init) {
  const Scenario& sc = instance.scenario();
  const SolverOptions& opt = sc.solver;
  const Network& net = instance.network();
  const auto& flows = instance.flows();
  const std::size_t L = net.num_links();
  if (init.flows.size() != flows.size()) throw ParameterError("initial solution does not match scenario");

  std::vector<std::vector<RecodingPolicy>> start;
  for (const auto& f : init.flows) start.push_back(f.policies);
  Solution baseline = solve_fixed_policies(instance, start, "pd");

  // Dense policy matrices, one per flow and hop.
  std::vector<std::vector<Matrix>> p(flows.size());
  for (std::size_t i = 0; i < flows.size(); ++i)
    for (std::size_t l = 0; l < flows[i].links.size(); ++l)
      p[i].push_back(project_stochastic(start[i][l].dense(flows[i].M, sc.M0(flows[i]) + 1)));

  std::vector<double> lam = baseline.multipliers;
  std::vector<double> alpha(flows.size(), 0.0);
  bool broken = false;
  for (int t = 0; t < opt.pd_iterations && !broken; ++t) {
    std::vector<double> load(L, 0.0);
    for (std::size_t i = 0; i < flows.size() && !broken; ++i) {
      const Flow& f = flows[i];
      const std::size_t H = f.links.size();
      std::vector<Matrix> P(H);
      std::vector<RankDistribution> h_in(H);
      RankDistribution h = point_mass(f.M, f.M);
      std::vector<double> mbar(H);
      double denom = 0.0;
      for (std::size_t l = 0; l < H; ++l) {
        h_in[l] = h;
        const RecodingPolicy pol = RecodingPolicy::adaptive(p[i][l]);
        mbar[l] = average_packets(pol, h);
        denom += lam[static_cast<std::size_t>(f.links[l])] * mbar[l];
        P[l] = transition_matrix(pol, instance.kernel(i, l));
        h = h * P[l];
      }
      const double E = expected_rank(h);
      if (!(denom > 0.0) || !std::isfinite(E)) {
        broken = !(denom >= 0.0) || !std::isfinite(E);
        alpha[i] = 0.0;
        continue;
      }
      alpha[i] = 1.0 / denom;
      for (std::size_t l = 0; l < H; ++l)
        load[static_cast<std::size_t>(f.links[l])] += alpha[i] * mbar[l];

      // Gradient of E / sum_e lambda_e mbar_e, with mbar_e differentiated
      // through its own policy only.
      const int cols = static_cast<int>(p[i][0].cols());
      std::vector<Matrix> grad(H);
      double gmax = 0.0;
      for (std::size_t l = 0; l < H; ++l) {
        const Matrix dE = gradient_expected_rank(point_mass(f.M, f.M), P, l, instance.kernel(i, l), cols);
        const Matrix dm = average_packets_gradient(h_in[l], cols);
        const double le = lam[static_cast<std::size_t>(f.links[l])];
        grad[l] = (dE * denom - E * le * dm) / (denom * denom);
        gmax = std::max(gmax, grad[l].cwiseAbs().maxCoeff());
      }
      if (!(gmax > 0.0) || !std::isfinite(gmax)) continue;
      const double beta = opt.pd_step / std::sqrt(1.0 + t);
      for (std::size_t l = 0; l < H; ++l) p[i][l] = project_stochastic(p[i][l] + (beta / gmax) * grad[l]);
    }
    if (broken) break;
    const Schedule s = max_weight_schedule(net, instance.schedules(), lam);
    const double gamma = opt.step_a / (opt.step_b + t);
    for (std::size_t e = 0; e < L; ++e) {
      const double rate = s.active(static_cast<int>(e)) ? net.links[e].capacity : 0.0;
      lam[e] = std::max(0.0, lam[e] + gamma * (load[e] - rate));
      if (!std::isfinite(lam[e])) broken = true;
    }
  }

  if (broken) {
    baseline.warnings.push_back("primal-dual iterates broke down; kept the initialization");
    baseline.status = SolveStatus::reverted;
    return baseline;
  }
  std::vector<std::vector<RecodingPolicy>> final_policies(flows.size());
  for (std::size_t i = 0; i < flows.size(); ++i)
    for (const Matrix& m : p[i]) final_policies[i].push_back(RecodingPolicy::adaptive(m));
  Solution sol = solve_fixed_policies(instance, final_policies, "pd");
  sol.iterations = opt.pd_iterations;
  if (!(sol.utility >= baseline.utility)) {
    baseline.warnings.push_back("primal-dual iterate did not improve; kept the initialization");
    baseline.iterations = opt.pd_iterations;
    baseline.status = SolveStatus::reverted;
    return baseline;
  }
  return sol;
}

}  // namespace batsnum
