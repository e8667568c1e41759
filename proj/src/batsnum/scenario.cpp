#include "batsnum/scenario.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "batsnum/errors.hpp"

namespace batsnum {

void Scenario::apply_interference() {
  if (interference != InterferenceKind::explicit_sets)
    network.interference = interference_sets(network, interference);
}

namespace {

bool is_prime_power(int q) {
  if (q < 2) return false;
  int p = 2;
  while (q % p != 0) ++p;
  while (q % p == 0) q /= p;
  return q == 1;
}

}  // namespace

void Scenario::validate() const {
  if (network.nodes.empty()) throw ValidationError("nodes", "at least one node required");
  network.validate();
  if (!is_prime_power(q)) throw ValidationError("code.q", "field size must be a prime power");
  if (m0_factor < 1) throw ValidationError("code.m0_factor", "must be at least 1");
  if (loss_m_max < 1) throw ValidationError("loss_estimation.m_max", "must be at least 1");
  if (loss_samples < 1) throw ValidationError("loss_estimation.samples", "must be at least 1");
  if (flows.empty()) throw ValidationError("flows", "at least one flow required");
  const int L = static_cast<int>(network.links.size());
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const Flow& f = flows[i];
    const std::string path = "flows[" + std::to_string(i) + "]";
    if (f.M < 1) throw ValidationError(path + ".M", "batch size must be positive");
    if (f.links.empty()) throw ValidationError(path + ".links", "flow needs at least one link");
    std::set<int> seen;
    for (std::size_t l = 0; l < f.links.size(); ++l) {
      const int e = f.links[l];
      if (e < 0 || e >= L)
        throw ValidationError(path + ".links[" + std::to_string(l) + "]", "unknown link");
      if (!seen.insert(e).second)
        throw ValidationError(path + ".links[" + std::to_string(l) + "]", "link repeated");
      if (l > 0 && network.links[static_cast<std::size_t>(f.links[l - 1])].head !=
                       network.links[static_cast<std::size_t>(e)].tail)
        throw ValidationError(path + ".links", "links " + std::to_string(l - 1) + " and " +
                                                   std::to_string(l) + " are not consecutive");
    }
  }
  const SolverOptions& s = solver;
  if (!(s.step_a > 0.0) || !(s.step_b >= 0.0))
    throw ValidationError("solver.step_a", "step schedule must be positive");
  if (s.dual_iterations < 1) throw ValidationError("solver.dual_iterations", "must be positive");
  if (!(s.recovery_tail > 0.0 && s.recovery_tail <= 1.0))
    throw ValidationError("solver.recovery_tail", "must lie in (0,1]");
  if (!(s.eta_min >= 1.0) || !(s.eta_max >= s.eta_min) || !(s.eta_step > 0.0))
    throw ValidationError("solver.eta_min", "eta grid must satisfy 1 <= eta_min <= eta_max, step > 0");
  if (s.pd_iterations < 0) throw ValidationError("solver.pd_iterations", "must be nonnegative");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (int i = 1; i <= 11; ++i) out.push_back("case" + std::to_string(i));
  return out;
}

Scenario preset_scenario(const std::string& name, LossFamily family) {
  int id = 0;
  if (name.rfind("case", 0) == 0) {
    try {
      id = std::stoi(name.substr(4));
    } catch (const std::exception&) {
      id = 0;
    }
  }
  if (id < 1 || id > 11 || name != "case" + std::to_string(id))
    throw ValidationError("preset", "unknown preset '" + name + "'");

  Scenario s;
  s.name = name;
  for (int v = 0; v <= 8; ++v) s.network.nodes.push_back("v" + std::to_string(v));
  std::vector<double> eps(8, 0.2), cap(8, 1.0);
  auto set = [](std::vector<double>& v, std::initializer_list<int> links, double x) {
    for (int e : links) v[static_cast<std::size_t>(e - 1)] = x;
  };
  switch (id) {
    case 2: set(cap, {3, 4, 5}, 2.0); break;
    case 3: set(cap, {1, 2, 6, 7, 8}, 0.5); break;
    case 4: set(cap, {1, 2, 6, 7, 8}, 0.25); break;
    case 5: set(eps, {3, 4, 5}, 0.1); break;
    case 6: set(eps, {3, 7}, 0.1); break;
    case 7: set(eps, {1, 2, 6, 7, 8}, 0.1); break;
    case 8: set(eps, {1, 2, 6, 7, 8}, 0.4); break;
    default: break;
  }
  for (int e = 1; e <= 8; ++e) {
    Link l;
    l.name = "e" + std::to_string(e);
    l.tail = e - 1;
    l.head = e;
    l.capacity = cap[static_cast<std::size_t>(e - 1)];
    const double x = eps[static_cast<std::size_t>(e - 1)];
    l.loss = family == LossFamily::iid ? LossSpec::independent(x)
                                       : LossSpec::gilbert_elliott(ge_preset_for_loss(x));
    s.network.links.push_back(l);
  }
  auto range = [](int a, int b) {
    std::vector<int> v;
    for (int e = a; e <= b; ++e) v.push_back(e - 1);
    return v;
  };
  std::vector<int> f1 = range(1, 5), f2 = range(3, 8);
  if (id == 9) f1 = range(1, 8), f2 = range(1, 8);
  if (id == 10) f1 = range(1, 8), f2 = range(3, 8);
  if (id == 11) f1 = range(1, 8), f2 = range(3, 6);
  s.flows = {Flow{"flow1", f1, 16}, Flow{"flow2", f2, 16}};
  s.interference = InterferenceKind::two_hop;
  s.apply_interference();
  s.validate();
  return s;
}

Instance::Instance(Scenario scenario) : scenario_(std::move(scenario)) {
  scenario_.validate();
  schedules_ = enumerate_feasible_schedules(scenario_.network);
  for (const Schedule& s : schedules_) schedule_rates_.push_back(rate_vector(scenario_.network, s));

  const std::size_t L = scenario_.network.links.size();
  std::vector<int> need(L, 1);
  for (const Flow& f : scenario_.flows)
    for (int e : f.links)
      need[static_cast<std::size_t>(e)] = std::max(need[static_cast<std::size_t>(e)], scenario_.M0(f));
  loss_models_.resize(L);
  int max_need = 1;
  for (int n : need) max_need = std::max(max_need, n);
  // Links with the same bursty channel share one empirical model, seeded by
  // the order in which distinct channels first appear.
  std::vector<std::pair<GEParams, std::shared_ptr<const BatchLossModel>>> estimated;
  for (std::size_t e = 0; e < L; ++e) {
    const LossSpec& spec = scenario_.network.links[e].loss;
    if (spec.kind == LossSpec::Kind::independent) {
      loss_models_[e] = std::make_shared<BatchLossModel>(independent_loss_model(spec.eps, need[e]));
      continue;
    }
    auto it = std::find_if(estimated.begin(), estimated.end(),
                           [&](const auto& p) { return p.first == spec.ge; });
    if (it == estimated.end()) {
      const int m_max = std::max(scenario_.loss_m_max, max_need);
      estimated.emplace_back(spec.ge, std::make_shared<BatchLossModel>(empirical_loss_model(
                                          spec, m_max, scenario_.loss_samples,
                                          derive_seed(scenario_.seed, estimated.size()),
                                          scenario_.estimator)));
      it = std::prev(estimated.end());
    }
    loss_models_[e] = it->second;
  }
  std::map<std::pair<int, int>, std::shared_ptr<const HopKernel>> cache;
  for (const Flow& f : scenario_.flows) {
    std::vector<std::shared_ptr<const HopKernel>> path;
    for (int e : f.links) {
      auto key = std::make_pair(e, f.M);
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, std::make_shared<HopKernel>(loss_model(e), scenario_.q, f.M,
                                                            scenario_.M0(f)))
                 .first;
      path.push_back(it->second);
    }
    kernels_.push_back(std::move(path));
  }
}

double Instance::loss_rate(int link) const {
  return scenario_.network.links[static_cast<std::size_t>(link)].loss.loss_rate();
}

std::vector<const HopKernel*> Instance::path_kernels(std::size_t flow) const {
  std::vector<const HopKernel*> out;
  for (const auto& k : kernels_[flow]) out.push_back(k.get());
  return out;
}

}  // namespace batsnum
