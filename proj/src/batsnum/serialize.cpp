#include "batsnum/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "batsnum/errors.hpp"

namespace batsnum {

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double as_double(const Json& j, const std::string& path, bool allow_null = false) {
  if (allow_null && j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw ValidationError(path, "expected a number");
  return j.get<double>();
}

std::int64_t as_int(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (std::floor(x) == x && std::abs(x) < 9e15) return static_cast<std::int64_t>(x);
  }
  throw ValidationError(path, "expected an integer");
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path, "expected a string");
  return j.get<std::string>();
}

bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw ValidationError(path, "expected true or false");
  return j.get<bool>();
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path, "expected an array");
  return j;
}

// Object reader that rejects keys nobody asked for.
class Obj {
 public:
  Obj(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ValidationError(path_, "expected an object");
  }
  ~Obj() = default;

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }
  const Json& need(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ValidationError(join(path_, key), "required field missing");
    return j_.at(key);
  }
  std::string at(const std::string& key) const { return join(path_, key); }

  double number(const std::string& key, double def) {
    return has(key) ? as_double(j_.at(key), at(key)) : def;
  }
  std::int64_t integer(const std::string& key, std::int64_t def) {
    return has(key) ? as_int(j_.at(key), at(key)) : def;
  }
  int small_int(const std::string& key, int def) {
    const std::int64_t v = integer(key, def);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
      throw ValidationError(at(key), "out of range");
    return static_cast<int>(v);
  }
  std::string string(const std::string& key, const std::string& def) {
    return has(key) ? as_string(j_.at(key), at(key)) : def;
  }
  bool boolean(const std::string& key, bool def) {
    return has(key) ? as_bool(j_.at(key), at(key)) : def;
  }

  void done() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) throw ValidationError(join(path_, k), "unknown field");
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

const char* interference_name(InterferenceKind k) {
  switch (k) {
    case InterferenceKind::two_hop: return "two-hop";
    case InterferenceKind::explicit_sets: return "explicit";
    case InterferenceKind::none: return "none";
    case InterferenceKind::all: return "all";
  }
  return "two-hop";
}

Json loss_to_json(const LossSpec& l) {
  if (l.kind == LossSpec::Kind::independent) return {{"model", "independent"}, {"eps", l.eps}};
  return {{"model", "gilbert-elliott"},
          {"s_G", l.ge.s_G},
          {"s_B", l.ge.s_B},
          {"p_GB", l.ge.p_GB},
          {"p_BG", l.ge.p_BG}};
}

LossSpec loss_from_json(const Json& j, const std::string& path) {
  Obj o(j, path);
  const std::string model = as_string(o.need("model"), o.at("model"));
  LossSpec out;
  if (model == "independent") {
    out = LossSpec::independent(as_double(o.need("eps"), o.at("eps")));
  } else if (model == "gilbert-elliott") {
    if (o.has("loss_rate")) {
      const double rate = o.number("loss_rate", 0.0);
      try {
        out = LossSpec::gilbert_elliott(ge_preset_for_loss(rate));
      } catch (const std::exception& e) {
        throw ValidationError(o.at("loss_rate"), e.what());
      }
    } else {
      GEParams p;
      p.s_G = as_double(o.need("s_G"), o.at("s_G"));
      p.s_B = as_double(o.need("s_B"), o.at("s_B"));
      p.p_GB = as_double(o.need("p_GB"), o.at("p_GB"));
      p.p_BG = as_double(o.need("p_BG"), o.at("p_BG"));
      out = LossSpec::gilbert_elliott(p);
    }
  } else {
    throw ValidationError(o.at("model"), "expected \"independent\" or \"gilbert-elliott\"");
  }
  o.done();
  try {
    out.validate();
  } catch (const std::exception& e) {
    throw ValidationError(path, e.what());
  }
  return out;
}

// A node or link reference: its name or its index.
int resolve(const Json& j, const std::string& path, const std::map<std::string, int>& names,
            std::size_t count, const char* what) {
  if (j.is_string()) {
    auto it = names.find(j.get<std::string>());
    if (it == names.end())
      throw ValidationError(path, std::string("unknown ") + what + " '" + j.get<std::string>() + "'");
    return it->second;
  }
  const std::int64_t i = as_int(j, path);
  if (i < 0 || i >= static_cast<std::int64_t>(count))
    throw ValidationError(path, std::string(what) + " index out of range");
  return static_cast<int>(i);
}

std::map<std::string, int> link_names(const Network& n) {
  std::map<std::string, int> out;
  for (std::size_t e = 0; e < n.links.size(); ++e) out.emplace(n.links[e].name, static_cast<int>(e));
  return out;
}

Json solver_to_json(const SolverOptions& s) {
  return {{"step_a", s.step_a},
          {"step_b", s.step_b},
          {"dual_iterations", s.dual_iterations},
          {"dual_tolerance", s.dual_tolerance},
          {"local_search_threshold", s.local_search_threshold},
          {"warm_start", s.warm_start},
          {"recovery_tail", s.recovery_tail},
          {"recovery_polish", s.recovery_polish},
          {"fixed_method", s.fixed_method == FixedPolicyMethod::barrier ? "barrier" : "subgradient"},
          {"barrier_gap", s.barrier_gap},
          {"subgradient_iterations", s.subgradient_iterations},
          {"eta_min", s.eta_min},
          {"eta_max", s.eta_max},
          {"eta_step", s.eta_step},
          {"eta_tolerance", s.eta_tolerance},
          {"pd_iterations", s.pd_iterations},
          {"pd_step", s.pd_step}};
}

SolverOptions solver_from_json(const Json& j, const std::string& path) {
  Obj o(j, path);
  SolverOptions s;
  s.step_a = o.number("step_a", s.step_a);
  s.step_b = o.number("step_b", s.step_b);
  s.dual_iterations = o.small_int("dual_iterations", s.dual_iterations);
  s.dual_tolerance = o.number("dual_tolerance", s.dual_tolerance);
  s.local_search_threshold = o.number("local_search_threshold", s.local_search_threshold);
  s.warm_start = o.boolean("warm_start", s.warm_start);
  s.recovery_tail = o.number("recovery_tail", s.recovery_tail);
  s.recovery_polish = o.boolean("recovery_polish", s.recovery_polish);
  const std::string method = o.string("fixed_method", "barrier");
  if (method == "barrier")
    s.fixed_method = FixedPolicyMethod::barrier;
  else if (method == "subgradient")
    s.fixed_method = FixedPolicyMethod::subgradient;
  else
    throw ValidationError(o.at("fixed_method"), "expected \"barrier\" or \"subgradient\"");
  s.barrier_gap = o.number("barrier_gap", s.barrier_gap);
  s.subgradient_iterations = o.small_int("subgradient_iterations", s.subgradient_iterations);
  s.eta_min = o.number("eta_min", s.eta_min);
  s.eta_max = o.number("eta_max", s.eta_max);
  s.eta_step = o.number("eta_step", s.eta_step);
  s.eta_tolerance = o.number("eta_tolerance", s.eta_tolerance);
  s.pd_iterations = o.small_int("pd_iterations", s.pd_iterations);
  s.pd_step = o.number("pd_step", s.pd_step);
  o.done();
  return s;
}

std::vector<double> doubles(const Json& j, const std::string& path, bool allow_null = false) {
  as_array(j, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_double(j[i], index(path, i), allow_null));
  return out;
}

Json numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

}  // namespace

Json to_json(const Scenario& s) {
  Json j;
  j["name"] = s.name;
  j["nodes"] = s.network.nodes;
  Json links = Json::array();
  for (const Link& l : s.network.links)
    links.push_back({{"name", l.name},
                     {"from", s.network.nodes[static_cast<std::size_t>(l.tail)]},
                     {"to", s.network.nodes[static_cast<std::size_t>(l.head)]},
                     {"capacity", l.capacity},
                     {"loss", loss_to_json(l.loss)}});
  j["links"] = links;
  j["interference"] = interference_name(s.interference);
  if (s.interference == InterferenceKind::explicit_sets) {
    Json sets = Json::array();
    for (const auto& set : s.network.interference) {
      Json names = Json::array();
      for (int f : set) names.push_back(s.network.links[static_cast<std::size_t>(f)].name);
      sets.push_back(names);
    }
    j["interference_sets"] = sets;
  }
  Json flows = Json::array();
  for (const Flow& f : s.flows) {
    Json names = Json::array();
    for (int e : f.links) names.push_back(s.network.links[static_cast<std::size_t>(e)].name);
    flows.push_back({{"name", f.name}, {"links", names}, {"M", f.M}});
  }
  j["flows"] = flows;
  j["code"] = {{"q", s.q}, {"m0_factor", s.m0_factor}};
  j["loss_estimation"] = {
      {"m_max", s.loss_m_max},
      {"samples", s.loss_samples},
      {"estimator", s.estimator == Estimator::stationary_windows ? "stationary-windows" : "independent-bursts"}};
  j["seed"] = s.seed;
  j["solver"] = solver_to_json(s.solver);
  return j;
}

Scenario scenario_from_json(const Json& j) {
  Obj o(j, "");
  Scenario s;
  s.name = o.string("name", "scenario");

  const Json& nodes = as_array(o.need("nodes"), "nodes");
  std::map<std::string, int> node_index;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    std::string name = as_string(nodes[v], index("nodes", v));
    if (!node_index.emplace(name, static_cast<int>(v)).second)
      throw ValidationError(index("nodes", v), "duplicate node name '" + name + "'");
    s.network.nodes.push_back(std::move(name));
  }

  const Json& links = as_array(o.need("links"), "links");
  if (links.size() > kMaxEnumeratedLinks)
    throw ValidationError("links", "at most " + std::to_string(kMaxEnumeratedLinks) + " links supported");
  std::map<std::string, int> link_index;
  for (std::size_t e = 0; e < links.size(); ++e) {
    const std::string path = index("links", e);
    Obj lo(links[e], path);
    Link l;
    l.name = lo.string("name", "e" + std::to_string(e + 1));
    if (!link_index.emplace(l.name, static_cast<int>(e)).second)
      throw ValidationError(lo.at("name"), "duplicate link name '" + l.name + "'");
    l.tail = resolve(lo.need("from"), lo.at("from"), node_index, nodes.size(), "node");
    l.head = resolve(lo.need("to"), lo.at("to"), node_index, nodes.size(), "node");
    l.capacity = lo.number("capacity", 1.0);
    l.loss = lo.has("loss") ? loss_from_json(links[e].at("loss"), lo.at("loss")) : LossSpec::independent(0.0);
    lo.done();
    s.network.links.push_back(std::move(l));
  }

  const std::string kind = o.string("interference", "two-hop");
  if (kind == "two-hop")
    s.interference = InterferenceKind::two_hop;
  else if (kind == "explicit")
    s.interference = InterferenceKind::explicit_sets;
  else if (kind == "none")
    s.interference = InterferenceKind::none;
  else if (kind == "all")
    s.interference = InterferenceKind::all;
  else
    throw ValidationError("interference", "expected two-hop, explicit, none or all");
  if (s.interference == InterferenceKind::explicit_sets) {
    const Json& sets = as_array(o.need("interference_sets"), "interference_sets");
    if (sets.size() != links.size())
      throw ValidationError("interference_sets", "one set per link required");
    for (std::size_t e = 0; e < sets.size(); ++e) {
      const std::string path = index("interference_sets", e);
      as_array(sets[e], path);
      std::vector<int> set;
      for (std::size_t k = 0; k < sets[e].size(); ++k)
        set.push_back(resolve(sets[e][k], index(path, k), link_index, links.size(), "link"));
      s.network.interference.push_back(std::move(set));
    }
  } else if (o.has("interference_sets")) {
    throw ValidationError("interference_sets", "only allowed with \"explicit\" interference");
  }

  const Json& flows = as_array(o.need("flows"), "flows");
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const std::string path = index("flows", i);
    Obj fo(flows[i], path);
    Flow f;
    f.name = fo.string("name", "flow" + std::to_string(i + 1));
    const Json& fl = as_array(fo.need("links"), fo.at("links"));
    for (std::size_t l = 0; l < fl.size(); ++l)
      f.links.push_back(resolve(fl[l], index(fo.at("links"), l), link_index, links.size(), "link"));
    f.M = fo.small_int("M", 16);
    fo.done();
    s.flows.push_back(std::move(f));
  }

  if (o.has("code")) {
    Obj co(j.at("code"), "code");
    s.q = co.small_int("q", s.q);
    s.m0_factor = co.small_int("m0_factor", s.m0_factor);
    co.done();
  }
  if (o.has("loss_estimation")) {
    Obj lo(j.at("loss_estimation"), "loss_estimation");
    s.loss_m_max = lo.small_int("m_max", s.loss_m_max);
    s.loss_samples = lo.small_int("samples", s.loss_samples);
    const std::string est = lo.string("estimator", "stationary-windows");
    if (est == "stationary-windows")
      s.estimator = Estimator::stationary_windows;
    else if (est == "independent-bursts")
      s.estimator = Estimator::independent_bursts;
    else
      throw ValidationError(lo.at("estimator"), "expected stationary-windows or independent-bursts");
    lo.done();
  }
  if (o.has("seed")) {
    const std::int64_t seed = as_int(j.at("seed"), "seed");
    if (seed < 0) throw ValidationError("seed", "must be nonnegative");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  if (o.has("solver")) s.solver = solver_from_json(j.at("solver"), "solver");
  o.done();

  s.apply_interference();
  s.validate();
  return s;
}

Json to_json(const BatchLossModel& m) { return {{"m_max", m.m_max()}, {"rows", m.rows()}}; }

BatchLossModel loss_model_from_json(const Json& j, const std::string& path) {
  Obj o(j, path);
  const std::int64_t m_max = as_int(o.need("m_max"), o.at("m_max"));
  const Json& rows = as_array(o.need("rows"), o.at("rows"));
  o.done();
  if (m_max < 0 || static_cast<std::size_t>(m_max) + 1 != rows.size())
    throw ValidationError(o.at("rows"), "expected m_max + 1 rows");
  std::vector<std::vector<double>> r;
  for (std::size_t m = 0; m < rows.size(); ++m) r.push_back(doubles(rows[m], index(o.at("rows"), m)));
  try {
    return BatchLossModel(std::move(r));
  } catch (const std::exception& e) {
    throw ValidationError(o.at("rows"), e.what());
  }
}

Json to_json(const RecodingPolicy& p) {
  if (p.is_nonadaptive()) return {{"type", "nonadaptive"}, {"m", p.m()}};
  const Matrix& P = p.p();
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < P.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index m = 0; m < P.cols(); ++m)
      if (P(r, m) != 0.0) row.push_back({m, P(r, m)});
    rows.push_back(row);
  }
  return {{"type", "adaptive"}, {"columns", P.cols()}, {"rows", rows}};
}

RecodingPolicy policy_from_json(const Json& j, const std::string& path) {
  Obj o(j, path);
  const std::string type = as_string(o.need("type"), o.at("type"));
  if (type == "nonadaptive") {
    const std::int64_t m = as_int(o.need("m"), o.at("m"));
    o.done();
    if (m < 0) throw ValidationError(o.at("m"), "must be nonnegative");
    return RecodingPolicy::nonadaptive(static_cast<int>(m));
  }
  if (type != "adaptive") throw ValidationError(o.at("type"), "expected nonadaptive or adaptive");
  const Json& rows = as_array(o.need("rows"), o.at("rows"));
  const std::int64_t cols = as_int(o.need("columns"), o.at("columns"));
  o.done();
  if (cols < 1 || rows.empty()) throw ValidationError(path, "empty policy matrix");
  Matrix P = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string rp = index(o.at("rows"), r);
    as_array(rows[r], rp);
    for (std::size_t k = 0; k < rows[r].size(); ++k) {
      const std::string ep = index(rp, k);
      const Json& e = rows[r][k];
      if (!e.is_array() || e.size() != 2) throw ValidationError(ep, "expected [m, probability]");
      const std::int64_t m = as_int(e[0], ep);
      if (m < 0 || m >= cols) throw ValidationError(ep, "transmit count out of range");
      P(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m)) = as_double(e[1], ep);
    }
  }
  try {
    return RecodingPolicy::adaptive(std::move(P));
  } catch (const std::exception& e) {
    throw ValidationError(path, e.what());
  }
}

Json to_json(const Solution& s, const Network& network) {
  Json j;
  j["mode"] = s.mode;
  j["scenario"] = s.scenario;
  j["status"] = to_string(s.status);
  j["iterations"] = s.iterations;
  j["utility"] = num(s.utility);
  j["upper_bound"] = num(s.upper_bound);
  j["kappa"] = num(s.kappa);
  j["rate"] = numbers(s.rate);
  j["multipliers"] = numbers(s.multipliers);
  Json sched = Json::array();
  for (const auto& [sch, w] : s.schedule) {
    Json names = Json::array();
    for (int e : sch.links()) names.push_back(network.links.at(static_cast<std::size_t>(e)).name);
    sched.push_back({{"links", names}, {"share", w}});
  }
  j["schedule"] = sched;
  Json flows = Json::array();
  for (const FlowSolution& f : s.flows) {
    Json pols = Json::array();
    for (const auto& p : f.policies) pols.push_back(to_json(p));
    flows.push_back({{"name", f.name},
                     {"alpha", f.alpha},
                     {"eta", f.eta},
                     {"policies", pols},
                     {"mbar", numbers(f.mbar)},
                     {"expected_rank", num(f.expected_rank)},
                     {"utility", num(f.utility)},
                     {"upper_utility", num(f.upper_utility)},
                     {"cutset", num(f.cutset)}});
  }
  j["flows"] = flows;
  j["warnings"] = s.warnings;
  return j;
}

Solution solution_from_json(const Json& j, const Network& network) {
  Obj o(j, "solution");
  Solution s;
  s.mode = o.string("mode", "");
  s.scenario = o.string("scenario", "");
  const std::string status = o.string("status", "converged");
  if (status == "converged")
    s.status = SolveStatus::converged;
  else if (status == "iteration_cap")
    s.status = SolveStatus::iteration_cap;
  else if (status == "reverted")
    s.status = SolveStatus::reverted;
  else
    throw ValidationError(o.at("status"), "unknown status");
  s.iterations = o.small_int("iterations", 0);
  auto opt_num = [&](const std::string& key) {
    return o.has(key) ? as_double(j.at(key), o.at(key), true) : 0.0;
  };
  s.utility = opt_num("utility");
  s.upper_bound = opt_num("upper_bound");
  s.kappa = opt_num("kappa");
  s.rate = doubles(o.need("rate"), o.at("rate"));
  if (s.rate.size() != network.links.size()) throw ValidationError(o.at("rate"), "one rate per link required");
  if (o.has("multipliers")) s.multipliers = doubles(j.at("multipliers"), o.at("multipliers"), true);
  if (o.has("schedule")) {
    const auto names = link_names(network);
    const Json& sched = as_array(j.at("schedule"), o.at("schedule"));
    for (std::size_t k = 0; k < sched.size(); ++k) {
      const std::string path = index(o.at("schedule"), k);
      Obj so(sched[k], path);
      const Json& ls = as_array(so.need("links"), so.at("links"));
      std::vector<int> links;
      for (std::size_t t = 0; t < ls.size(); ++t)
        links.push_back(resolve(ls[t], index(so.at("links"), t), names, network.links.size(), "link"));
      const double share = as_double(so.need("share"), so.at("share"));
      so.done();
      s.schedule.emplace_back(Schedule::of(links), share);
    }
  }
  const Json& flows = as_array(o.need("flows"), o.at("flows"));
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const std::string path = index(o.at("flows"), i);
    Obj fo(flows[i], path);
    FlowSolution f;
    f.name = fo.string("name", "");
    f.alpha = as_double(fo.need("alpha"), fo.at("alpha"));
    f.eta = fo.number("eta", 1.0);
    const Json& pols = as_array(fo.need("policies"), fo.at("policies"));
    for (std::size_t l = 0; l < pols.size(); ++l)
      f.policies.push_back(policy_from_json(pols[l], index(fo.at("policies"), l)));
    if (fo.has("mbar")) f.mbar = doubles(flows[i].at("mbar"), fo.at("mbar"), true);
    auto fnum = [&](const std::string& key) {
      return fo.has(key) ? as_double(flows[i].at(key), fo.at(key), true) : 0.0;
    };
    f.expected_rank = fnum("expected_rank");
    f.utility = fnum("utility");
    f.upper_utility = fnum("upper_utility");
    f.cutset = fnum("cutset");
    fo.done();
    s.flows.push_back(std::move(f));
  }
  if (o.has("warnings")) {
    const Json& w = as_array(j.at("warnings"), o.at("warnings"));
    for (std::size_t k = 0; k < w.size(); ++k) s.warnings.push_back(as_string(w[k], index(o.at("warnings"), k)));
  }
  o.done();
  return s;
}

Json to_json(const SimReport& r) {
  Json j;
  j["scenario"] = r.scenario;
  j["slots"] = r.slots;
  j["seed"] = r.seed;
  j["utility"] = num(r.utility);
  Json flows = Json::array();
  for (const FlowSimStats& f : r.flows)
    flows.push_back({{"name", f.name},
                     {"alpha", f.alpha},
                     {"emitted", f.emitted},
                     {"completed", f.completed},
                     {"rank_histogram", f.rank_histogram},
                     {"mean_rank", f.mean_rank},
                     {"rank_stderr", f.rank_stderr},
                     {"delivered_batch_rate", f.delivered_batch_rate},
                     {"utility", num(f.utility)}});
  j["flows"] = flows;
  Json links = Json::array();
  for (const LinkSimStats& l : r.links)
    links.push_back({{"sent", l.sent},
                     {"received", l.received},
                     {"observed_loss", l.sent > 0 ? 1.0 - static_cast<double>(l.received) / l.sent : 0.0}});
  j["links"] = links;
  const StabilityReport st = buffer_stability(r);
  Json nodes = Json::array();
  for (std::size_t v = 0; v < r.buffers.size(); ++v) {
    const auto& b = r.buffers[v];
    std::int32_t peak = 0;
    for (auto x : b) peak = std::max(peak, x);
    nodes.push_back({{"name", r.node_names[v]},
                     {"final_buffer", b.empty() ? 0 : b.back()},
                     {"peak_buffer", peak},
                     {"slope", st.slope[v]}});
  }
  j["nodes"] = nodes;
  j["buffer_sample_every"] = r.sample_every;
  j["stable"] = st.stable;
  j["warnings"] = r.warnings;
  return j;
}

Json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path, std::string("malformed JSON: ") + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

Scenario load_scenario(const std::string& name_or_path, LossFamily family) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end())
    return preset_scenario(name_or_path, family);
  return scenario_from_json(parse_json_file(name_or_path));
}

}  // namespace batsnum
