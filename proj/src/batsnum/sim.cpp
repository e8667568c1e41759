#include "batsnum/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <optional>
#include <ostream>

#include "batsnum/errors.hpp"
#include "batsnum/fixed_policy.hpp"

namespace batsnum {

TdmaFrame build_tdma_frame(const Decomposition& decomposition, int frame_length) {
  if (frame_length < 1) throw ParameterError("frame length must be positive");
  TdmaFrame frame;
  double total = 0.0;
  for (const auto& [s, w] : decomposition) {
    if (w < 0.0) throw ParameterError("negative time share");
    total += w;
  }
  if (total > 1.0 + 1e-9) throw ParameterError("time shares sum to more than 1");

  const std::size_t K = decomposition.size();
  std::vector<int> count(K);
  std::vector<double> frac(K);
  int assigned = 0;
  for (std::size_t k = 0; k < K; ++k) {
    const double exact = decomposition[k].second * frame_length;
    count[k] = static_cast<int>(std::floor(exact + 1e-9));
    frac[k] = exact - count[k];
    assigned += count[k];
  }
  const int target = std::min(frame_length, static_cast<int>(std::llround(total * frame_length)));
  std::vector<std::size_t> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t idx = 0; assigned < target && idx < K; ++idx) {
    ++count[order[idx]];
    ++assigned;
  }
  for (std::size_t k = 0; k < K; ++k)
    if (count[k] == 0 && decomposition[k].second >= 1e-6)
      frame.warnings.push_back("time share " + std::to_string(decomposition[k].second) +
                               " too small for a frame of " + std::to_string(frame_length) +
                               " slots; dropped");

  // Smooth weighted round robin over the schedules plus an idle entry.
  const int idle = frame_length - assigned;
  std::vector<int> weight(count);
  weight.push_back(idle);
  std::vector<int> current(weight.size(), 0);
  frame.slots.reserve(static_cast<std::size_t>(frame_length));
  for (int t = 0; t < frame_length; ++t) {
    std::size_t pick = 0;
    for (std::size_t k = 0; k < weight.size(); ++k) {
      current[k] += weight[k];
      if (current[k] > current[pick]) pick = k;
    }
    current[pick] -= frame_length;
    frame.slots.push_back(pick < K ? decomposition[pick].first : Schedule());
  }
  return frame;
}

int BatchSource::tick() {
  acc_ += alpha_;
  int n = 0;
  while (acc_ >= 1.0) {
    acc_ -= 1.0;
    ++n;
  }
  return n;
}

namespace {

int sample_count(const RecodingPolicy& policy, int rank, Rng& rng) {
  if (policy.is_nonadaptive()) return policy.m();
  const double u = rng.uniform();
  double acc = 0.0;
  const int top = policy.max_support();
  for (int m = 0; m <= top; ++m) {
    acc += policy.prob(m, rank);
    if (u < acc) return m;
  }
  for (int m = top; m >= 0; --m)
    if (policy.prob(m, rank) > 0.0) return m;
  return 0;
}

}  // namespace

std::vector<std::vector<Element>> recode_batch(const RowSpace& received, const RecodingPolicy& policy,
                                               RecodingMode mode, Rng& rng) {
  const int r = static_cast<int>(received.rank());
  const int m = sample_count(policy, r, rng);
  std::vector<std::vector<Element>> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) {
    if (mode == RecodingMode::systematic && t < r)
      out.push_back(received.innovative()[static_cast<std::size_t>(t)]);
    else
      out.push_back(received.random_combination(rng));
  }
  for (std::size_t i = out.size(); i > 1; --i) std::swap(out[i - 1], out[rng.below(i)]);
  return out;
}

namespace {

struct Receiver {
  std::int64_t batch = -1;
  bool open = false;
  std::optional<RowSpace> space;
};

class Simulator {
 public:
  Simulator(const Scenario& sc, const Solution& sol, const SimOptions& opt)
      : sc_(sc), sol_(sol), opt_(opt), net_(sc.network), code_rng_(derive_seed(opt.seed, 1)) {
    const std::size_t L = net_.num_links();
    queues_.resize(L);
    credit_.assign(L, 0.0);
    node_buffer_.assign(net_.nodes.size(), 0);
    for (std::size_t e = 0; e < L; ++e) {
      chan_rng_.emplace_back(derive_seed(opt.seed, 1000 + e));
      const LossSpec& spec = net_.links[e].loss;
      if (spec.kind == LossSpec::Kind::gilbert_elliott)
        ge_.emplace_back(GEChannel::steady(spec.ge, chan_rng_.back()));
      else
        ge_.emplace_back(std::nullopt);
    }
    report_.scenario = sc.name;
    report_.slots = opt.slots;
    report_.seed = opt.seed;
    report_.sample_every = std::max(1, opt.buffer_sample_every);
    report_.links.resize(L);
    report_.node_names = net_.nodes;
    report_.buffers.resize(net_.nodes.size());
    for (auto& b : report_.buffers) b.reserve(static_cast<std::size_t>(opt.slots / report_.sample_every + 1));
    for (std::size_t i = 0; i < sc.flows.size(); ++i) {
      const Flow& f = sc.flows[i];
      sources_.emplace_back(sol.flows[i].alpha * opt.alpha_scale);
      next_batch_.push_back(0);
      rx_.emplace_back(f.links.size());
      sink_next_.push_back(0);
      sink_ranks_.emplace_back();
      RowSpace id(Field(sc.q), static_cast<std::size_t>(f.M));
      for (int b = 0; b < f.M; ++b) {
        std::vector<Element> v(static_cast<std::size_t>(f.M), 0);
        v[static_cast<std::size_t>(b)] = 1;
        id.insert(v);
      }
      identity_.push_back(std::move(id));
      FlowSimStats st;
      st.name = f.name;
      st.alpha = sol.flows[i].alpha * opt.alpha_scale;
      report_.flows.push_back(st);
    }
  }

  SimReport run() {
    const TdmaFrame frame = build_tdma_frame(schedule(), opt_.frame_length);
    report_.warnings = frame.warnings;
    std::vector<Packet> arrivals;
    for (std::int64_t slot = 0; slot < opt_.slots; ++slot) {
      for (std::size_t i = 0; i < sources_.size(); ++i) {
        for (int n = sources_[i].tick(); n > 0; --n) {
          ++report_.flows[i].emitted;
          enqueue_batch(static_cast<int>(i), 0, next_batch_[i]++, identity_[i]);
        }
      }
      const Schedule& active = frame.slots[static_cast<std::size_t>(slot % opt_.frame_length)];
      arrivals.clear();
      for (int e : active.links()) transmit(e, arrivals);
      for (Packet& p : arrivals) receive(std::move(p));
      if ((slot + 1) % report_.sample_every == 0)
        for (std::size_t v = 0; v < node_buffer_.size(); ++v)
          report_.buffers[v].push_back(static_cast<std::int32_t>(node_buffer_[v]));
    }
    finish();
    return std::move(report_);
  }

 private:
  Decomposition schedule() const {
    if (!sol_.schedule.empty()) return sol_.schedule;
    return decompose_rate_vector(net_, sol_.rate);
  }

  int link_of(int flow, int hop) const {
    return sc_.flows[static_cast<std::size_t>(flow)].links[static_cast<std::size_t>(hop)];
  }

  void enqueue_batch(int flow, int hop, std::int64_t batch, const RowSpace& received) {
    const RecodingPolicy& pol = sol_.flows[static_cast<std::size_t>(flow)].policies[static_cast<std::size_t>(hop)];
    auto coefs = recode_batch(received, pol, opt_.mode, code_rng_);
    const int e = link_of(flow, hop);
    auto& q = queues_[static_cast<std::size_t>(e)];
    for (std::size_t k = 0; k < coefs.size(); ++k) {
      Packet p;
      p.flow = flow;
      p.hop = hop;
      p.batch = batch;
      p.coef = std::move(coefs[k]);
      p.last_of_batch = k + 1 == coefs.size();
      q.push_back(std::move(p));
    }
    node_buffer_[static_cast<std::size_t>(net_.links[static_cast<std::size_t>(e)].tail)] +=
        static_cast<std::int64_t>(coefs.size());
  }

  void transmit(int e, std::vector<Packet>& arrivals) {
    const auto ue = static_cast<std::size_t>(e);
    const double c = net_.links[ue].capacity;
    credit_[ue] = std::min(credit_[ue] + c, std::max(1.0, c));
    auto& q = queues_[ue];
    while (credit_[ue] >= 1.0 - 1e-12 && !q.empty()) {
      credit_[ue] -= 1.0;
      Packet p = std::move(q.front());
      q.pop_front();
      --node_buffer_[static_cast<std::size_t>(net_.links[ue].tail)];
      p.seq = report_.links[ue].sent++;
      bool ok;
      if (ge_[ue])
        ok = ge_[ue]->step(chan_rng_[ue]).received;
      else
        ok = chan_rng_[ue].bernoulli(1.0 - net_.links[ue].loss.eps);
      if (ok) {
        ++report_.links[ue].received;
        arrivals.push_back(std::move(p));
      }
    }
  }

  void receive(Packet p) {
    const auto f = static_cast<std::size_t>(p.flow);
    Receiver& rx = rx_[f][static_cast<std::size_t>(p.hop)];
    if (rx.open && p.batch > rx.batch) close(p.flow, p.hop);
    if (!rx.open) {
      if (p.batch <= rx.batch) return;  // straggler of a closed batch
      rx.batch = p.batch;
      rx.open = true;
      rx.space.emplace(Field(sc_.q), p.coef.size());
    }
    rx.space->insert(p.coef);
    if (p.last_of_batch) close(p.flow, p.hop);
  }

  void close(int flow, int hop) {
    const auto f = static_cast<std::size_t>(flow);
    Receiver& rx = rx_[f][static_cast<std::size_t>(hop)];
    rx.open = false;
    const auto H = static_cast<int>(sc_.flows[f].links.size());
    if (hop + 1 < H) {
      enqueue_batch(flow, hop + 1, rx.batch, *rx.space);
    } else {
      // Batches never heard of at the sink were lost entirely.
      for (; sink_next_[f] < rx.batch; ++sink_next_[f]) sink_ranks_[f].push_back(0);
      sink_ranks_[f].push_back(static_cast<int>(rx.space->rank()));
      sink_next_[f] = rx.batch + 1;
    }
  }

  void finish() {
    double total = 0.0;
    for (std::size_t i = 0; i < sc_.flows.size(); ++i) {
      FlowSimStats& st = report_.flows[i];
      const int M = sc_.flows[i].M;
      const auto& ranks = sink_ranks_[i];
      st.completed = static_cast<std::int64_t>(ranks.size());
      st.rank_histogram.assign(static_cast<std::size_t>(M) + 1, 0.0);
      double sum = 0.0, sq = 0.0;
      for (int r : ranks) {
        st.rank_histogram[static_cast<std::size_t>(r)] += 1.0;
        sum += r;
        sq += static_cast<double>(r) * r;
      }
      const double n = static_cast<double>(ranks.size());
      if (n > 0) {
        for (double& h : st.rank_histogram) h /= n;
        st.mean_rank = sum / n;
        const double var = n > 1 ? std::max(0.0, (sq - n * st.mean_rank * st.mean_rank) / (n - 1)) : 0.0;
        st.rank_stderr = std::sqrt(var / n);
      }
      st.delivered_batch_rate = opt_.slots > 0 ? n / static_cast<double>(opt_.slots) : 0.0;
      st.utility = std::log(st.alpha * st.mean_rank);
      total += st.utility;
    }
    report_.utility = total;
  }

  const Scenario& sc_;
  const Solution& sol_;
  const SimOptions& opt_;
  const Network& net_;
  Rng code_rng_;
  std::vector<Rng> chan_rng_;
  std::vector<std::optional<GEChannel>> ge_;
  std::vector<std::deque<Packet>> queues_;
  std::vector<double> credit_;
  std::vector<std::int64_t> node_buffer_;
  std::vector<BatchSource> sources_;
  std::vector<std::int64_t> next_batch_;
  std::vector<std::vector<Receiver>> rx_;
  std::vector<std::int64_t> sink_next_;
  std::vector<std::vector<int>> sink_ranks_;
  std::vector<RowSpace> identity_;
  SimReport report_;
};

}  // namespace

SimReport run_simulation(const Scenario& scenario, const Solution& solution, const SimOptions& options) {
  scenario.validate();
  if (options.slots < 0) throw ParameterError("slots must be nonnegative");
  if (!(options.alpha_scale > 0.0)) throw ParameterError("alpha_scale must be positive");
  if (scenario.q != 2 && scenario.q != 256)
    throw ParameterError("the simulator supports q = 2 and q = 256");
  for (std::size_t i = 0; i < solution.flows.size() && i < scenario.flows.size(); ++i) {
    if (solution.flows[i].policies.size() != scenario.flows[i].links.size())
      throw ValidationError("flows[" + std::to_string(i) + "].policies", "needs one policy per hop");
    if (!(solution.flows[i].alpha >= 0.0))
      throw ValidationError("flows[" + std::to_string(i) + "].alpha", "must be nonnegative");
  }
  check_feasible(scenario, solution);
  Simulator sim(scenario, solution, options);
  return sim.run();
}

StabilityReport buffer_stability(const SimReport& report, double threshold) {
  StabilityReport out;
  for (const auto& series : report.buffers) {
    const std::size_t n = series.size();
    double slope = 0.0;
    if (n >= 4) {
      const std::size_t start = n / 2;
      const double k = static_cast<double>(n - start);
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t j = start; j < n; ++j) {
        const double x = static_cast<double>(j - start) * report.sample_every;
        const double y = series[j];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double den = k * sxx - sx * sx;
      slope = den > 0.0 ? (k * sxy - sx * sy) / den : 0.0;
    }
    out.slope.push_back(slope);
    if (!(slope < threshold)) out.stable = false;
  }
  return out;
}

void write_buffer_csv(std::ostream& out, const SimReport& report, int stride) {
  stride = std::max(1, stride);
  out << "slot,node,buffer_size\n";
  if (report.buffers.empty()) return;
  const std::size_t n = report.buffers.front().size();
  for (std::size_t k = 0; k < n; k += static_cast<std::size_t>(stride)) {
    const auto slot = static_cast<std::int64_t>(k + 1) * report.sample_every;
    for (std::size_t v = 0; v < report.buffers.size(); ++v)
      out << slot << ',' << report.node_names[v] << ',' << report.buffers[v][k] << '\n';
  }
}

}  // namespace batsnum
