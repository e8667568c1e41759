#include "batsnum/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "batsnum/errors.hpp"
#include "batsnum/fixed_policy.hpp"

namespace batsnum {

double PathRankCache::operator()(const std::vector<int>& m) {
  auto it = memo_.find(m);
  if (it != memo_.end()) return it->second;
  const double e = path_expected_rank(kernels_, m);
  memo_.emplace(m, e);
  return e;
}

namespace {

double denominator(const std::vector<double>& lambda, const std::vector<int>& m) {
  double d = 0.0;
  for (std::size_t l = 0; l < m.size(); ++l) d += lambda[l] * m[l];
  return d;
}

// Objective used by the local search; when the path carries no price the
// rate is capped by the tightest hop capacity instead.
double objective(PathRankCache& cache, const std::vector<double>& lambda,
                 const std::vector<double>& capacity, const std::vector<int>& m, bool priced) {
  const double e = cache(m);
  if (priced) {
    const double d = denominator(lambda, m);
    return d > 0.0 ? e / d : (e > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  }
  double cap = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < m.size(); ++l)
    if (m[l] > 0) cap = std::min(cap, capacity[l] / m[l]);
  return std::isfinite(cap) ? e * cap : 0.0;
}

}  // namespace

LocalSearchResult flow_subproblem_local_search(PathRankCache& cache, const std::vector<double>& lambda,
                                               const std::vector<double>& capacity,
                                               std::vector<int> init, double threshold) {
  const auto& kernels = cache.kernels();
  const std::size_t L = kernels.size();
  if (lambda.size() != L || init.size() != L || capacity.size() != L)
    throw ParameterError("local search: one entry per hop required");
  for (double x : lambda)
    if (x < 0.0) throw ParameterError("multipliers must be nonnegative");
  const bool priced = std::any_of(lambda.begin(), lambda.end(), [](double x) { return x > 0.0; });

  LocalSearchResult res;
  res.unbounded = !priced;
  std::vector<int> cur = std::move(init);
  for (std::size_t l = 0; l < L; ++l) cur[l] = std::clamp(cur[l], 0, kernels[l]->m_cap());
  double cur_val = objective(cache, lambda, capacity, cur, priced);

  std::size_t combos = 1;
  for (std::size_t l = 0; l < L; ++l) combos *= 3;
  std::vector<int> cand(L), best;
  for (;;) {
    best = cur;
    double best_val = cur_val;
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t code = c;
      bool valid = true;
      // Offsets run -1, 0, +1 per hop, first hop most significant.
      for (std::size_t l = L; l-- > 0;) {
        cand[l] = cur[l] + static_cast<int>(code % 3) - 1;
        code /= 3;
        if (cand[l] < 0 || cand[l] > kernels[l]->m_cap()) valid = false;
      }
      if (!valid) continue;
      const double v = objective(cache, lambda, capacity, cand, priced);
      if (v > best_val) {
        best_val = v;
        best = cand;
      }
    }
    ++res.steps;
    const double gain = best_val - cur_val;
    if (best == cur) break;
    cur = best;
    cur_val = best_val;
    if (!(gain >= threshold) && std::isfinite(gain)) break;
    if (res.steps > 100000) break;
  }
  res.m = cur;
  res.objective = cur_val;
  if (priced) {
    const double d = denominator(lambda, cur);
    res.alpha = d > 0.0 ? 1.0 / d : 0.0;
  } else {
    double cap = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < L; ++l)
      if (cur[l] > 0) cap = std::min(cap, capacity[l] / cur[l]);
    res.alpha = std::isfinite(cap) ? cap : 0.0;
  }
  return res;
}

LocalSearchResult flow_subproblem_coordinate_search(PathRankCache& cache,
                                                    const std::vector<double>& lambda,
                                                    std::vector<int> init) {
  const auto& kernels = cache.kernels();
  const std::size_t L = kernels.size();
  if (lambda.size() != L || init.size() != L)
    throw ParameterError("coordinate search: one entry per hop required");
  std::vector<double> unit(L, 1.0);
  LocalSearchResult res;
  std::vector<int> cur = std::move(init);
  double cur_val = objective(cache, lambda, unit, cur, true);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t l = 0; l < L; ++l) {
      std::vector<int> cand = cur;
      int best_m = cur[l];
      double best_val = cur_val;
      for (int m = 0; m <= kernels[l]->m_cap(); ++m) {
        cand[l] = m;
        const double v = objective(cache, lambda, unit, cand, true);
        if (v > best_val) {
          best_val = v;
          best_m = m;
        }
      }
      if (best_m != cur[l]) {
        cur[l] = best_m;
        cur_val = best_val;
        changed = true;
      }
    }
    ++res.steps;
  }
  res.m = cur;
  res.objective = cur_val;
  const double d = denominator(lambda, cur);
  res.alpha = d > 0.0 ? 1.0 / d : 0.0;
  return res;
}

std::vector<int> initial_recoding_numbers(const Instance& instance, std::size_t flow) {
  const Flow& f = instance.flows()[flow];
  std::vector<int> m;
  for (std::size_t l = 0; l < f.links.size(); ++l) {
    const double eps = instance.loss_rate(f.links[l]);
    const int v = static_cast<int>(std::ceil(f.M / (1.0 - eps) - 1e-9));
    m.push_back(std::clamp(v, 1, instance.kernel(flow, l).m_cap()));
  }
  return m;
}

namespace {

std::vector<std::vector<RecodingPolicy>> nonadaptive_policies(const std::vector<std::vector<int>>& m) {
  std::vector<std::vector<RecodingPolicy>> out;
  for (const auto& flow : m) {
    std::vector<RecodingPolicy> p;
    for (int x : flow) p.push_back(RecodingPolicy::nonadaptive(x));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

Solution solve_nap(const Instance& instance) {
  const Scenario& sc = instance.scenario();
  const SolverOptions& opt = sc.solver;
  const Network& net = instance.network();
  const std::size_t L = net.num_links();
  const std::size_t F = instance.flows().size();

  std::vector<PathRankCache> caches;
  std::vector<std::vector<int>> m(F);
  std::vector<std::vector<double>> caps(F);
  for (std::size_t i = 0; i < F; ++i) {
    caches.emplace_back(instance.path_kernels(i));
    m[i] = initial_recoding_numbers(instance, i);
    for (int e : instance.flows()[i].links) caps[i].push_back(net.links[static_cast<std::size_t>(e)].capacity);
  }
  std::vector<double> lam(L);
  for (std::size_t e = 0; e < L; ++e) lam[e] = 1.0 / net.links[e].capacity;

  const int T = opt.dual_iterations;
  const int tail_start = T - std::max(1, static_cast<int>(std::ceil(opt.recovery_tail * T)));
  std::vector<std::vector<std::vector<int>>> visited;  // distinct joint m, first-seen order
  std::map<std::vector<std::vector<int>>, std::size_t> seen;
  bool dual_converged = false;
  bool unbounded = false;
  int t = 0;
  std::vector<double> alpha(F, 0.0);
  for (; t < T; ++t) {
    for (std::size_t i = 0; i < F; ++i) {
      std::vector<double> lp;
      for (int e : instance.flows()[i].links) lp.push_back(lam[static_cast<std::size_t>(e)]);
      const LocalSearchResult r =
          flow_subproblem_local_search(caches[i], lp, caps[i],
                                       opt.warm_start ? m[i] : initial_recoding_numbers(instance, i),
                                       opt.local_search_threshold);
      m[i] = r.m;
      alpha[i] = r.alpha;
      unbounded = unbounded || r.unbounded;
    }
    const Schedule s = max_weight_schedule(net, instance.schedules(), lam);
    std::vector<double> load(L, 0.0);
    for (std::size_t i = 0; i < F; ++i) {
      const auto& links = instance.flows()[i].links;
      for (std::size_t l = 0; l < links.size(); ++l)
        load[static_cast<std::size_t>(links[l])] += alpha[i] * m[i][l];
    }
    const double gamma = opt.step_a / (opt.step_b + t);
    double change = 0.0;
    for (std::size_t e = 0; e < L; ++e) {
      const double rate = s.active(static_cast<int>(e)) ? net.links[e].capacity : 0.0;
      const double next = std::max(0.0, lam[e] + gamma * (load[e] - rate));
      change = std::max(change, std::abs(next - lam[e]));
      lam[e] = next;
    }
    if (t >= tail_start && seen.emplace(m, visited.size()).second) visited.push_back(m);
    if (change < opt.dual_tolerance) {
      dual_converged = true;
      if (seen.emplace(m, visited.size()).second) visited.push_back(m);
      ++t;
      break;
    }
  }

  // Feasibility recovery: fix each visited recoding vector and solve for
  // (alpha, s); keep the best.
  Solution best;
  bool have = false;
  for (const auto& cand : visited) {
    Solution sol = solve_fixed_policies(instance, nonadaptive_policies(cand), "nap");
    if (!have || sol.utility > best.utility) {
      best = std::move(sol);
      have = true;
    }
  }
  std::vector<std::vector<int>> best_m;
  for (const auto& f : best.flows) {
    std::vector<int> v;
    for (const auto& p : f.policies) v.push_back(p.m());
    best_m.push_back(v);
  }

  // Polish: re-run the flow subproblems at the recovered multipliers until
  // the recoding vectors are a fixed point or stop improving.
  if (opt.recovery_polish) {
    for (int round = 0; round < 50; ++round) {
      std::vector<std::vector<int>> next = best_m;
      for (std::size_t i = 0; i < F; ++i) {
        std::vector<double> lp;
        for (int e : instance.flows()[i].links) lp.push_back(best.multipliers[static_cast<std::size_t>(e)]);
        next[i] = flow_subproblem_local_search(caches[i], lp, caps[i], best_m[i],
                                               opt.local_search_threshold)
                      .m;
      }
      if (next == best_m) break;
      Solution sol = solve_fixed_policies(instance, nonadaptive_policies(next), "nap");
      if (!(sol.utility > best.utility + 1e-12)) break;
      best = std::move(sol);
      best_m = std::move(next);
    }
  }

  best.iterations = t;
  if (!dual_converged) best.warnings.push_back("dual loop stopped at the iteration cap");
  if (unbounded) best.warnings.push_back("a flow saw zero path price during the dual loop");
  return best;
}

Solution solve_up(const Instance& instance) {
  const auto& flows = instance.flows();
  FixedPolicyProblem prob;
  Solution sol;
  sol.mode = "up";
  sol.scenario = instance.scenario().name;
  for (const Flow& f : flows) {
    std::vector<std::pair<int, double>> load;
    FlowSolution fs;
    fs.name = f.name;
    for (int e : f.links) {
      const double a = 1.0 / (1.0 - instance.loss_rate(e));
      load.emplace_back(e, a);
      fs.mbar.push_back(a);
    }
    prob.load.push_back(std::move(load));
    prob.gain.push_back(1.0);
    fs.expected_rank = 1.0;
    fs.cutset = 1.0;
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
    sol.flows[i].utility = std::log(r.alpha[i]);
    sol.flows[i].upper_utility = sol.flows[i].utility;
    sol.utility += sol.flows[i].utility;
  }
  sol.upper_bound = sol.utility;
  sol.kappa = 1.0;
  return sol;
}

SingleFlowResult solve_single_flow_no_collision(const std::vector<const HopKernel*>& kernels, double c) {
  if (kernels.empty()) throw ParameterError("empty path");
  if (!(c > 0.0)) throw ParameterError("capacity must be positive");
  int cap = kernels.front()->m_cap();
  for (const auto* k : kernels) cap = std::min(cap, k->m_cap());
  SingleFlowResult best;
  double best_ratio = -1.0;
  for (int m = 1; m <= cap; ++m) {
    const std::vector<int> mv(kernels.size(), m);
    const double ratio = path_expected_rank(kernels, mv) / m;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best.m = mv;
      best.alpha = c / m;
      best.throughput = c * ratio;
    }
  }
  return best;
}

SingleFlowResult solve_single_flow_all_collision(const std::vector<const HopKernel*>& kernels, double c,
                                                 std::vector<int> init) {
  if (!(c > 0.0)) throw ParameterError("capacity must be positive");
  PathRankCache cache(kernels);
  const std::vector<double> unit(kernels.size(), 1.0);
  const LocalSearchResult r = flow_subproblem_local_search(cache, unit, unit, std::move(init), 1e-12);
  SingleFlowResult out;
  out.m = r.m;
  int total = 0;
  for (int x : r.m) total += x;
  out.alpha = total > 0 ? c / total : 0.0;
  out.throughput = out.alpha * cache(r.m);
  return out;
}

}  // namespace batsnum
