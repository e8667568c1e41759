#include "batsnum/netmodel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include "batsnum/errors.hpp"
#include "batsnum/simplex.hpp"

namespace batsnum {

bool Network::conflict(int a, int b) const {
  const auto& s = interference[static_cast<std::size_t>(a)];
  return std::find(s.begin(), s.end(), b) != s.end();
}

void Network::validate() const {
  const int n = static_cast<int>(nodes.size());
  for (std::size_t e = 0; e < links.size(); ++e) {
    const Link& l = links[e];
    const std::string path = "links[" + std::to_string(e) + "]";
    if (l.tail < 0 || l.tail >= n || l.head < 0 || l.head >= n)
      throw ValidationError(path, "endpoint references an unknown node");
    if (l.tail == l.head) throw ValidationError(path, "self loop");
    if (!(l.capacity > 0.0) || !std::isfinite(l.capacity))
      throw ValidationError(path + ".capacity", "must be positive");
    try {
      l.loss.validate();
    } catch (const ParameterError& err) {
      throw ValidationError(path + ".loss", err.what());
    }
  }
  if (interference.size() != links.size())
    throw ValidationError("interference", "one set per link required");
  for (std::size_t e = 0; e < links.size(); ++e) {
    for (int f : interference[e]) {
      const std::string path = "interference[" + std::to_string(e) + "]";
      if (f < 0 || f >= static_cast<int>(links.size()))
        throw ValidationError(path, "unknown link index " + std::to_string(f));
      if (f == static_cast<int>(e)) throw ValidationError(path, "link interferes with itself");
      if (!conflict(f, static_cast<int>(e)))
        throw ValidationError(path, "not symmetric with link " + std::to_string(f));
    }
  }
}

std::vector<std::vector<int>> two_hop_interference(const Network& network) {
  const std::size_t n = network.nodes.size();
  std::vector<std::set<int>> adj(n);
  for (const Link& l : network.links) {
    adj[static_cast<std::size_t>(l.tail)].insert(l.head);
    adj[static_cast<std::size_t>(l.head)].insert(l.tail);
  }
  auto near = [&](int u, int v) {
    return u == v || adj[static_cast<std::size_t>(u)].count(v) > 0;
  };
  const std::size_t L = network.links.size();
  std::vector<std::vector<int>> sets(L);
  for (std::size_t a = 0; a < L; ++a) {
    for (std::size_t b = 0; b < L; ++b) {
      if (a == b) continue;
      const Link& x = network.links[a];
      const Link& y = network.links[b];
      if (near(x.tail, y.tail) || near(x.tail, y.head) || near(x.head, y.tail) ||
          near(x.head, y.head))
        sets[a].push_back(static_cast<int>(b));
    }
  }
  return sets;
}

std::vector<std::vector<int>> interference_sets(const Network& network, InterferenceKind kind) {
  const std::size_t L = network.links.size();
  switch (kind) {
    case InterferenceKind::two_hop:
      return two_hop_interference(network);
    case InterferenceKind::none:
      return std::vector<std::vector<int>>(L);
    case InterferenceKind::all: {
      std::vector<std::vector<int>> sets(L);
      for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = 0; b < L; ++b)
          if (a != b) sets[a].push_back(static_cast<int>(b));
      return sets;
    }
    case InterferenceKind::explicit_sets:
      return network.interference;
  }
  return {};
}

Schedule Schedule::of(const std::vector<int>& links) {
  std::uint32_t mask = 0;
  for (int e : links) mask |= 1u << e;
  return Schedule(mask);
}

std::vector<int> Schedule::links() const {
  std::vector<int> out;
  for (int e = 0; e < 32; ++e)
    if (active(e)) out.push_back(e);
  return out;
}

int Schedule::size() const { return std::popcount(mask_); }

bool is_feasible(const Network& network, const Schedule& s) {
  for (int e : s.links()) {
    if (e >= static_cast<int>(network.num_links())) return false;
    for (int f : network.interference[static_cast<std::size_t>(e)])
      if (s.active(f)) return false;
  }
  return true;
}

std::vector<Schedule> enumerate_feasible_schedules(const Network& network) {
  const std::size_t L = network.num_links();
  if (L > kMaxEnumeratedLinks)
    throw SizeError("schedule enumeration supports at most 25 links, got " + std::to_string(L));
  std::vector<std::uint32_t> conflicts(L, 0);
  for (std::size_t e = 0; e < L; ++e)
    for (int f : network.interference[e]) conflicts[e] |= 1u << f;
  // Grow independent sets link by link; each set is extended only with
  // larger indices, so every set appears once.
  std::vector<std::uint32_t> masks{0};
  std::vector<std::uint32_t> blocked{0};
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const std::uint32_t m = masks[i];
    const int start = m == 0 ? 0 : 32 - std::countl_zero(m);
    for (int e = start; e < static_cast<int>(L); ++e) {
      if (blocked[i] & (1u << e)) continue;
      masks.push_back(m | (1u << e));
      blocked.push_back(blocked[i] | conflicts[static_cast<std::size_t>(e)]);
    }
  }
  std::sort(masks.begin(), masks.end());
  std::vector<Schedule> out;
  out.reserve(masks.size());
  for (auto m : masks) out.emplace_back(m);
  return out;
}

std::vector<double> rate_vector(const Network& network, const Schedule& s) {
  std::vector<double> r(network.num_links(), 0.0);
  for (int e : s.links()) r[static_cast<std::size_t>(e)] = network.links[static_cast<std::size_t>(e)].capacity;
  return r;
}

namespace {

// True when a's 0/1 vector precedes b's lexicographically.
bool lex_less(std::uint32_t a, std::uint32_t b) {
  if (a == b) return false;
  const std::uint32_t diff = a ^ b;
  const int first = std::countr_zero(diff);  // lowest link index that differs
  return ((a >> first) & 1u) == 0;
}

}  // namespace

Schedule max_weight_schedule(const Network& network, const std::vector<Schedule>& schedules,
                             const std::vector<double>& weights) {
  if (weights.size() != network.num_links())
    throw ParameterError("one weight per link required");
  for (double w : weights)
    if (w < 0.0) throw ParameterError("schedule weights must be nonnegative");
  Schedule best;
  double best_value = -1.0;
  for (const Schedule& s : schedules) {
    double v = 0.0;
    for (int e : s.links())
      v += weights[static_cast<std::size_t>(e)] * network.links[static_cast<std::size_t>(e)].capacity;
    const double tol = 1e-12 * std::max(1.0, std::abs(best_value));
    if (v > best_value + tol || (v >= best_value - tol && lex_less(s.mask(), best.mask()))) {
      best = s;
      best_value = v;
    }
  }
  return best;
}

Schedule max_weight_schedule(const Network& network, const std::vector<double>& weights) {
  return max_weight_schedule(network, enumerate_feasible_schedules(network), weights);
}

RateCover min_time_share(const Network& network, const std::vector<Schedule>& schedules,
                         const std::vector<double>& target) {
  const std::size_t L = network.num_links();
  if (target.size() != L) throw ParameterError("target needs one entry per link");
  for (double t : target)
    if (!(t >= 0.0)) throw ParameterError("target rates must be nonnegative");
  // Dual of  min sum w  s.t.  sum_S w_S r_S >= target:
  //   max target.y  s.t.  r_S.y <= 1, y >= 0.
  std::vector<std::vector<double>> A;
  std::vector<Schedule> rows;
  for (const Schedule& s : schedules) {
    if (s.mask() == 0) continue;
    A.push_back(rate_vector(network, s));
    rows.push_back(s);
  }
  const std::vector<double> b(A.size(), 1.0);
  const LpResult lp = simplex_maximize(target, A, b);
  RateCover out;
  if (lp.status == LpResult::Status::unbounded) {
    // Some loaded link belongs to no schedule.
    out.time_share = std::numeric_limits<double>::infinity();
    out.certificate.assign(L, 0.0);
    for (std::size_t e = 0; e < L; ++e) {
      bool covered = false;
      for (const auto& row : A) covered = covered || row[e] > 0.0;
      if (!covered && target[e] > 0.0) out.certificate[e] = 1.0;
    }
    return out;
  }
  out.time_share = lp.value;
  out.certificate = lp.x;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (lp.dual[i] > 1e-15) out.decomposition.emplace_back(rows[i], lp.dual[i]);
  return out;
}

Decomposition decompose_rate_vector(const Network& network, const std::vector<Schedule>& schedules,
                                    const std::vector<double>& target) {
  RateCover c = min_time_share(network, schedules, target);
  if (c.time_share > 1.0 + 1e-9)
    throw InfeasibleError("rate vector lies outside the rate region (time share needed " +
                              std::to_string(c.time_share) + ")",
                          c.certificate);
  return c.decomposition;
}

Decomposition decompose_rate_vector(const Network& network, const std::vector<double>& target) {
  return decompose_rate_vector(network, enumerate_feasible_schedules(network), target);
}

std::vector<double> combined_rate(const Network& network, const Decomposition& d) {
  std::vector<double> r(network.num_links(), 0.0);
  for (const auto& [s, w] : d)
    for (int e : s.links())
      r[static_cast<std::size_t>(e)] += w * network.links[static_cast<std::size_t>(e)].capacity;
  return r;
}

}  // namespace batsnum
