#include "batsnum/fixed_policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "batsnum/errors.hpp"
#include "batsnum/linalg.hpp"
#include "batsnum/rankcalc.hpp"
#include "batsnum/recoding.hpp"

namespace batsnum {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::iteration_cap: return "iteration_cap";
    case SolveStatus::reverted: return "reverted";
  }
  return "unknown";
}

double utility_ratio(double U_total, double U_tilde_total, std::size_t k) {
  if (k < 1) throw ParameterError("utility_ratio needs at least one flow");
  return std::exp((U_total - U_tilde_total) / static_cast<double>(k));
}

void attach_upper_bound(Solution& sol, const Solution& bound) {
  sol.upper_bound = bound.utility;
  for (std::size_t i = 0; i < sol.flows.size() && i < bound.flows.size(); ++i)
    sol.flows[i].upper_utility = bound.flows[i].utility;
  sol.kappa = utility_ratio(sol.utility, sol.upper_bound, sol.flows.size());
}

namespace {

std::vector<double> link_loads(std::size_t L, const FixedPolicyProblem& p,
                               const std::vector<double>& alpha) {
  std::vector<double> load(L, 0.0);
  for (std::size_t i = 0; i < p.load.size(); ++i)
    for (const auto& [e, a] : p.load[i]) load[static_cast<std::size_t>(e)] += alpha[i] * a;
  return load;
}

// Finds the least time share covering the loads of res.alpha; if it exceeds
// one, every rate is divided by it, which is exact because the share scales
// linearly with the load. The schedule then realizes the loads.
void cover_loads(const Network& network, const std::vector<Schedule>& schedules,
                 const FixedPolicyProblem& p, FixedPolicyResult& res) {
  const std::size_t L = network.num_links();
  RateCover cover = min_time_share(network, schedules, link_loads(L, p, res.alpha));
  if (!std::isfinite(cover.time_share))
    throw InfeasibleError("a loaded link can never be scheduled", cover.certificate);
  if (cover.time_share > 1.0) {
    for (double& a : res.alpha) a /= cover.time_share;
    for (auto& entry : cover.decomposition) entry.second /= cover.time_share;
  }
  res.schedule = std::move(cover.decomposition);
  res.rate = combined_rate(network, res.schedule);
}

FixedPolicyResult solve_barrier(const Network& network, const std::vector<Schedule>& schedules,
                                const FixedPolicyProblem& p, const SolverOptions& opt) {
  const std::size_t L = network.num_links();
  const std::size_t F = p.load.size();
  std::vector<std::vector<double>> rates;
  for (const Schedule& s : schedules) rates.push_back(rate_vector(network, s));
  if (std::none_of(schedules.begin(), schedules.end(), [](const Schedule& s) { return s.mask() == 0; }))
    rates.emplace_back(L, 0.0);
  const std::size_t K = rates.size();
  const std::size_t n = L + 1;

  // Dense flow coefficient vectors a_i.
  std::vector<Vector> a(F, Vector::Zero(static_cast<Eigen::Index>(L)));
  for (std::size_t i = 0; i < F; ++i)
    for (const auto& [e, v] : p.load[i]) a[i](e) += v;
  std::vector<Vector> r(K, Vector::Zero(static_cast<Eigen::Index>(L)));
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t e = 0; e < L; ++e) r[k](static_cast<Eigen::Index>(e)) = rates[k][e];

  Vector lam(static_cast<Eigen::Index>(L));
  for (std::size_t e = 0; e < L; ++e) lam(static_cast<Eigen::Index>(e)) = 1.0 / network.links[e].capacity;
  double z = 1.0;
  for (const auto& rk : r) z = std::max(z, rk.dot(lam) + 1.0);

  double t = 1.0;
  const double mu = 10.0;
  const double m_constraints = static_cast<double>(K + L);

  auto value = [&](const Vector& l, double zz, double tt, bool& ok) {
    ok = true;
    double f = tt * zz;
    for (std::size_t i = 0; i < F; ++i) {
      const double d = a[i].dot(l);
      if (!(d > 0.0)) {
        ok = false;
        return 0.0;
      }
      f -= tt * std::log(d);
    }
    for (std::size_t k = 0; k < K; ++k) {
      const double d = zz - r[k].dot(l);
      if (!(d > 0.0)) {
        ok = false;
        return 0.0;
      }
      f -= std::log(d);
    }
    for (Eigen::Index e = 0; e < l.size(); ++e) {
      if (!(l(e) > 0.0)) {
        ok = false;
        return 0.0;
      }
      f -= std::log(l(e));
    }
    return f;
  };

  FixedPolicyResult res;
  int newton_steps = 0;
  for (;;) {
    for (int it = 0; it < 200; ++it) {
      Vector g = Vector::Zero(static_cast<Eigen::Index>(n));
      Matrix H = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      const auto zi = static_cast<Eigen::Index>(L);
      for (std::size_t i = 0; i < F; ++i) {
        const double d = a[i].dot(lam);
        g.head(zi) -= t * a[i] / d;
        H.topLeftCorner(zi, zi) += t * (a[i] * a[i].transpose()) / (d * d);
      }
      g(zi) += t;
      for (std::size_t k = 0; k < K; ++k) {
        const double d = z - r[k].dot(lam);
        g.head(zi) += r[k] / d;
        g(zi) -= 1.0 / d;
        const double w = 1.0 / (d * d);
        H.topLeftCorner(zi, zi) += w * (r[k] * r[k].transpose());
        H.block(0, zi, zi, 1) -= w * r[k];
        H.block(zi, 0, 1, zi) -= w * r[k].transpose();
        H(zi, zi) += w;
      }
      for (Eigen::Index e = 0; e < zi; ++e) {
        g(e) -= 1.0 / lam(e);
        H(e, e) += 1.0 / (lam(e) * lam(e));
      }
      const Vector dx = -H.ldlt().solve(g);
      const double decrement2 = -g.dot(dx);
      ++newton_steps;
      if (decrement2 / 2.0 < 1e-12) break;
      bool ok = false;
      const double f0 = value(lam, z, t, ok);
      double step = 1.0;
      for (int ls = 0; ls < 80; ++ls, step *= 0.5) {
        const Vector l2 = lam + step * dx.head(zi);
        const double z2 = z + step * dx(zi);
        const double f1 = value(l2, z2, t, ok);
        if (ok && f1 <= f0 - 0.25 * step * decrement2) {
          lam = l2;
          z = z2;
          break;
        }
      }
    }
    res.gap = m_constraints / t;
    if (res.gap < opt.barrier_gap) break;
    if (t > 1e16) break;
    t *= mu;
  }
  res.converged = res.gap < opt.barrier_gap;
  res.iterations = newton_steps;

  res.alpha.resize(F);
  for (std::size_t i = 0; i < F; ++i) res.alpha[i] = 1.0 / a[i].dot(lam);
  cover_loads(network, schedules, p, res);
  res.multipliers.assign(lam.data(), lam.data() + lam.size());
  return res;
}

FixedPolicyResult solve_subgradient(const Network& network, const std::vector<Schedule>& schedules,
                                    const FixedPolicyProblem& p, const SolverOptions& opt) {
  const std::size_t L = network.num_links();
  const std::size_t F = p.load.size();
  std::vector<double> lam(L);
  for (std::size_t e = 0; e < L; ++e) lam[e] = 1.0 / network.links[e].capacity;
  // alpha_i cannot exceed min_e c_e / a_ie; the box keeps the subproblem
  // bounded while some multipliers are zero.
  std::vector<double> alpha_max(F, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < F; ++i)
    for (const auto& [e, a] : p.load[i])
      if (a > 0.0) alpha_max[i] = std::min(alpha_max[i], network.links[static_cast<std::size_t>(e)].capacity / a);
  std::vector<double> alpha(F, 0.0), alpha_avg(F, 0.0);
  FixedPolicyResult res;
  int t = 0;
  for (; t < opt.subgradient_iterations; ++t) {
    for (std::size_t i = 0; i < F; ++i) {
      double d = 0.0;
      for (const auto& [e, a] : p.load[i]) d += lam[static_cast<std::size_t>(e)] * a;
      alpha[i] = d > 0.0 ? std::min(1.0 / d, alpha_max[i]) : alpha_max[i];
    }
    const Schedule s = max_weight_schedule(network, schedules, lam);
    const auto rate = rate_vector(network, s);
    const auto load = link_loads(L, p, alpha);
    const double gamma = opt.step_a / (opt.step_b + t);
    double change = 0.0;
    for (std::size_t e = 0; e < L; ++e) {
      const double next = std::max(0.0, lam[e] + gamma * (load[e] - rate[e]));
      change = std::max(change, std::abs(next - lam[e]));
      lam[e] = next;
    }
    for (std::size_t i = 0; i < F; ++i) alpha_avg[i] += alpha[i];
    if (change < opt.dual_tolerance && t > 10) {
      ++t;
      res.converged = true;
      break;
    }
  }
  res.iterations = t;
  res.alpha.resize(F);
  for (std::size_t i = 0; i < F; ++i) res.alpha[i] = alpha_avg[i] / t;
  cover_loads(network, schedules, p, res);
  res.multipliers = lam;
  return res;
}

}  // namespace

FixedPolicyResult solve_fixed_policy(const Network& network, const std::vector<Schedule>& schedules,
                                     const FixedPolicyProblem& problem,
                                     const SolverOptions& options) {
  if (problem.load.size() != problem.gain.size())
    throw ParameterError("one gain per flow required");
  for (std::size_t i = 0; i < problem.load.size(); ++i) {
    double total = 0.0;
    for (const auto& [e, a] : problem.load[i]) {
      if (e < 0 || e >= static_cast<int>(network.num_links())) throw ParameterError("unknown link");
      if (a < 0.0) throw ParameterError("load coefficients must be nonnegative");
      total += a;
    }
    if (!(total > 0.0)) throw ParameterError("flow " + std::to_string(i) + " places no load");
    if (!(problem.gain[i] > 0.0))
      throw ParameterError("flow " + std::to_string(i) + " has zero expected rank");
  }
  FixedPolicyResult res = options.fixed_method == FixedPolicyMethod::barrier
                              ? solve_barrier(network, schedules, problem, options)
                              : solve_subgradient(network, schedules, problem, options);
  res.objective = 0.0;
  for (std::size_t i = 0; i < res.alpha.size(); ++i)
    res.objective += std::log(res.alpha[i] * problem.gain[i]);
  return res;
}

FlowEvaluation evaluate_flow(const Instance& instance, std::size_t flow,
                             const std::vector<RecodingPolicy>& policies) {
  const Flow& f = instance.flows()[flow];
  if (policies.size() != f.links.size())
    throw ParameterError("flow " + f.name + " needs one policy per hop");
  FlowEvaluation ev;
  RankDistribution h = point_mass(f.M, f.M);
  for (std::size_t l = 0; l < f.links.size(); ++l) {
    ev.mbar.push_back(average_packets(policies[l], h));
    h = h * transition_matrix(policies[l], instance.kernel(flow, l));
  }
  ev.expected_rank = expected_rank(h);
  return ev;
}

Solution solve_fixed_policies(const Instance& instance,
                              const std::vector<std::vector<RecodingPolicy>>& policies,
                              const std::string& mode) {
  const auto& flows = instance.flows();
  if (policies.size() != flows.size()) throw ParameterError("one policy list per flow required");
  FixedPolicyProblem prob;
  Solution sol;
  sol.mode = mode;
  sol.scenario = instance.scenario().name;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const FlowEvaluation ev = evaluate_flow(instance, i, policies[i]);
    std::vector<std::pair<int, double>> load;
    for (std::size_t l = 0; l < flows[i].links.size(); ++l) load.emplace_back(flows[i].links[l], ev.mbar[l]);
    prob.load.push_back(std::move(load));
    prob.gain.push_back(ev.expected_rank);
    FlowSolution fs;
    fs.name = flows[i].name;
    fs.policies = policies[i];
    fs.mbar = ev.mbar;
    fs.expected_rank = ev.expected_rank;
    std::vector<std::pair<double, double>> edges;
    for (std::size_t l = 0; l < flows[i].links.size(); ++l)
      edges.emplace_back(ev.mbar[l], instance.loss_rate(flows[i].links[l]));
    fs.cutset = cutset_bound(flows[i].M, edges);
    sol.flows.push_back(std::move(fs));
  }
  const FixedPolicyResult r =
      solve_fixed_policy(instance.network(), instance.schedules(), prob, instance.scenario().solver);
  sol.rate = r.rate;
  sol.schedule = r.schedule;
  sol.multipliers = r.multipliers;
  sol.iterations = r.iterations;
  sol.status = r.converged ? SolveStatus::converged : SolveStatus::iteration_cap;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    sol.flows[i].alpha = r.alpha[i];
    sol.flows[i].utility = std::log(r.alpha[i] * sol.flows[i].expected_rank);
    sol.utility += sol.flows[i].utility;
  }
  return sol;
}

void check_feasible(const Scenario& scenario, const Solution& sol, double tol) {
  const Network& network = scenario.network;
  const std::size_t L = network.num_links();
  if (sol.rate.size() != L) throw ValidationError("rate", "needs one entry per link");
  if (sol.flows.size() != scenario.flows.size())
    throw ValidationError("flows", "solution and scenario disagree on the number of flows");
  std::vector<double> load(L, 0.0);
  for (std::size_t i = 0; i < sol.flows.size(); ++i) {
    const auto& links = scenario.flows[i].links;
    if (sol.flows[i].mbar.size() != links.size())
      throw ValidationError("flows[" + std::to_string(i) + "].mbar", "needs one entry per hop");
    for (std::size_t l = 0; l < links.size(); ++l)
      load[static_cast<std::size_t>(links[l])] += sol.flows[i].alpha * sol.flows[i].mbar[l];
  }
  std::vector<double> excess(L, 0.0);
  bool bad = false;
  for (std::size_t e = 0; e < L; ++e) {
    excess[e] = std::max(0.0, load[e] - sol.rate[e]);
    if (excess[e] > tol) bad = true;
  }
  if (bad) throw InfeasibleError("link load exceeds the scheduled rate", excess);

  if (sol.schedule.empty()) {
    decompose_rate_vector(network, sol.rate);  // throws with a certificate
    return;
  }
  double share = 0.0;
  for (const auto& [s, w] : sol.schedule) {
    if (!is_feasible(network, s))
      throw InfeasibleError("schedule violates interference", std::vector<double>(L, 0.0));
    if (w < 0.0) throw InfeasibleError("negative time share", std::vector<double>(L, 0.0));
    share += w;
  }
  if (share > 1.0 + tol)
    throw InfeasibleError("time shares sum to more than 1", std::vector<double>(L, 0.0));
  const auto combined = combined_rate(network, sol.schedule);
  for (std::size_t e = 0; e < L; ++e) {
    excess[e] = std::max(0.0, sol.rate[e] - combined[e]);
    if (excess[e] > tol) bad = true;
  }
  if (bad) throw InfeasibleError("rate vector is not realized by the schedule", excess);
}

}  // namespace batsnum
