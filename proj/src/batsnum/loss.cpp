#include "batsnum/loss.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "batsnum/errors.hpp"
#include "batsnum/rankcalc.hpp"

namespace batsnum {

BatchLossModel::BatchLossModel(std::vector<std::vector<double>> rows)
    : rows_(std::move(rows)) {
  if (rows_.empty()) throw ParameterError("loss model needs at least row 0");
  for (std::size_t m = 0; m < rows_.size(); ++m) {
    const auto& row = rows_[m];
    if (row.size() != m + 1)
      throw ParameterError("loss model row " + std::to_string(m) + " must have " +
                           std::to_string(m + 1) + " entries");
    double sum = 0.0;
    for (double v : row) {
      if (!(v >= -1e-12) || !std::isfinite(v))
        throw ParameterError("loss model row " + std::to_string(m) +
                             " has a negative or non-finite entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ParameterError("loss model row " + std::to_string(m) + " sums to " +
                           std::to_string(sum));
  }
  if (std::abs(rows_[0][0] - 1.0) > 1e-12) throw ParameterError("q(0|0) must be 1");
}

BatchLossModel independent_loss_model(double eps, int m_max) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw ParameterError("loss rate must lie in [0,1), got " + std::to_string(eps));
  if (m_max < 1) throw ParameterError("m_max must be at least 1");
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(m_max) + 1);
  const double s = 1.0 - eps;
  for (int m = 0; m <= m_max; ++m) {
    auto& row = rows[static_cast<std::size_t>(m)];
    row.resize(static_cast<std::size_t>(m) + 1);
    for (int r = 0; r <= m; ++r) {
      // lgamma keeps C(m,r) finite for large m.
      const double logc = std::lgamma(m + 1.0) - std::lgamma(r + 1.0) - std::lgamma(m - r + 1.0);
      double v;
      if (eps == 0.0)
        v = r == m ? 1.0 : 0.0;
      else
        v = std::exp(logc + r * std::log(s) + (m - r) * std::log(eps));
      row[static_cast<std::size_t>(r)] = v;
    }
    double sum = 0.0;
    for (double v : row) sum += v;
    for (double& v : row) v /= sum;
  }
  return BatchLossModel(std::move(rows));
}

void GEParams::validate() const {
  auto prob = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!prob(s_G) || !prob(s_B))
    throw ParameterError("GE success probabilities must lie in [0,1]");
  if (!(p_GB > 0.0 && p_GB <= 1.0) || !(p_BG > 0.0 && p_BG <= 1.0))
    throw ParameterError("GE transition probabilities must lie in (0,1]");
}

GEParams ge_preset_for_loss(double loss_rate) {
  if (std::abs(loss_rate - 0.1) < 1e-12) return {1.0, 0.8, 1e-3, 1e-3};
  if (std::abs(loss_rate - 0.2) < 1e-12) return {1.0, 0.6, 1e-3, 1e-3};
  if (std::abs(loss_rate - 0.4) < 1e-12) return {0.8, 0.4, 1e-3, 1e-3};
  throw ParameterError("no GE preset for loss rate " + std::to_string(loss_rate));
}

GEChannel GEChannel::steady(GEParams params, Rng& rng) {
  params.validate();
  return GEChannel(params, rng.bernoulli(params.pi_G()) ? State::good : State::bad);
}

GEChannel::Step GEChannel::step(Rng& rng) {
  const bool good = state_ == State::good;
  const bool received = rng.bernoulli(good ? params_.s_G : params_.s_B);
  if (good) {
    if (rng.bernoulli(params_.p_GB)) state_ = State::bad;
  } else {
    if (rng.bernoulli(params_.p_BG)) state_ = State::good;
  }
  return {received, state_};
}

void LossSpec::validate() const {
  if (kind == Kind::independent) {
    if (!(eps >= 0.0 && eps < 1.0))
      throw ParameterError("loss rate must lie in [0,1), got " + std::to_string(eps));
  } else {
    ge.validate();
    if (!(ge.loss_rate() < 1.0)) throw ParameterError("GE channel never delivers");
  }
}

namespace {

// Packet-level success source shared by both estimators.
class PacketSource {
 public:
  PacketSource(const LossSpec& spec, Rng& rng) : spec_(spec), rng_(rng) {
    if (spec.kind == LossSpec::Kind::gilbert_elliott)
      channel_.emplace(GEChannel::steady(spec.ge, rng));
  }
  void restart() {
    if (channel_) *channel_ = GEChannel::steady(spec_.ge, rng_);
  }
  bool next() {
    if (channel_) return channel_->step(rng_).received;
    return rng_.bernoulli(1.0 - spec_.eps);
  }

 private:
  const LossSpec& spec_;
  Rng& rng_;
  std::optional<GEChannel> channel_;
};

}  // namespace

BatchLossModel empirical_loss_model(const LossSpec& spec, int m_max, int samples,
                                    std::uint64_t seed, Estimator estimator) {
  spec.validate();
  if (m_max < 1) throw ParameterError("m_max must be at least 1");
  if (samples < 1) throw ParameterError("samples must be at least 1");
  Rng rng(seed);
  PacketSource source(spec, rng);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(m_max) + 1);
  rows[0] = {1.0};

  if (estimator == Estimator::independent_bursts) {
    for (int m = 1; m <= m_max; ++m) {
      std::vector<double> hist(static_cast<std::size_t>(m) + 1, 0.0);
      for (int s = 0; s < samples; ++s) {
        source.restart();
        int received = 0;
        for (int k = 0; k < m; ++k) received += source.next() ? 1 : 0;
        hist[static_cast<std::size_t>(received)] += 1.0;
      }
      for (double& v : hist) v /= samples;
      rows[static_cast<std::size_t>(m)] = std::move(hist);
    }
    return BatchLossModel(std::move(rows));
  }

  const std::size_t n = static_cast<std::size_t>(samples) * static_cast<std::size_t>(m_max);
  // prefix[k] = successes among the first k packets of the doubled chain.
  std::vector<int> prefix(2 * n + 1, 0);
  std::vector<unsigned char> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = source.next() ? 1 : 0;
  for (std::size_t k = 0; k < 2 * n; ++k) prefix[k + 1] = prefix[k] + z[k % n];
  for (int m = 1; m <= m_max; ++m) {
    std::vector<double> hist(static_cast<std::size_t>(m) + 1, 0.0);
    std::vector<std::size_t> counts(static_cast<std::size_t>(m) + 1, 0);
    for (std::size_t start = 0; start < n; ++start)
      ++counts[static_cast<std::size_t>(prefix[start + static_cast<std::size_t>(m)] - prefix[start])];
    for (std::size_t r = 0; r < counts.size(); ++r)
      hist[r] = static_cast<double>(counts[r]) / static_cast<double>(n);
    rows[static_cast<std::size_t>(m)] = std::move(hist);
  }
  return BatchLossModel(std::move(rows));
}

BatchLossModel ge_exact_loss_model(const GEParams& params, int m_max) {
  params.validate();
  if (m_max < 1) throw ParameterError("m_max must be at least 1");
  // f[s][r]: probability of being in state s (before the next packet) with r
  // successes so far.
  std::vector<double> fg{params.pi_G()}, fb{params.pi_B()};
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(m_max) + 1);
  rows[0] = {1.0};
  for (int m = 1; m <= m_max; ++m) {
    std::vector<double> ng(static_cast<std::size_t>(m) + 1, 0.0), nb(ng);
    std::vector<double> row(static_cast<std::size_t>(m) + 1, 0.0);
    for (int r = 0; r < m; ++r) {
      const auto ur = static_cast<std::size_t>(r);
      const double g = fg[ur], b = fb[ur];
      // Emission in the current state, then transition.
      const double g_ok = g * params.s_G, g_lost = g * (1 - params.s_G);
      const double b_ok = b * params.s_B, b_lost = b * (1 - params.s_B);
      row[ur + 1] += g_ok + b_ok;
      row[ur] += g_lost + b_lost;
      ng[ur + 1] += g_ok * (1 - params.p_GB) + b_ok * params.p_BG;
      nb[ur + 1] += g_ok * params.p_GB + b_ok * (1 - params.p_BG);
      ng[ur] += g_lost * (1 - params.p_GB) + b_lost * params.p_BG;
      nb[ur] += g_lost * params.p_GB + b_lost * (1 - params.p_BG);
    }
    double sum = 0.0;
    for (double v : row) sum += v;
    for (double& v : row) v /= sum;
    rows[static_cast<std::size_t>(m)] = std::move(row);
    fg = std::move(ng);
    fb = std::move(nb);
  }
  return BatchLossModel(std::move(rows));
}

double complementary_cdf(const BatchLossModel& model, int i, int t) {
  if (t < 0 || t > model.m_max())
    throw ParameterError("t=" + std::to_string(t) + " outside [0, m_max]");
  if (i <= 0) return 1.0;
  double s = 0.0;
  for (int j = i; j <= t; ++j) s += model.q(j, t);
  return s;
}

MonotoneConcaveReport check_monotone_concave(const BatchLossModel& model, int M,
                                             int q_field, double tolerance) {
  if (model.m_max() < 3) throw ParameterError("check needs m_max >= 3");
  const HopKernel kernel(model, q_field, M, model.m_max());
  MonotoneConcaveReport rep;
  double worst = 0.0;
  for (int r = 1; r <= M; ++r) {
    std::vector<double> e(static_cast<std::size_t>(model.m_max()) + 1);
    for (int t = 0; t <= model.m_max(); ++t) e[static_cast<std::size_t>(t)] = kernel.expected_rank(r, t);
    for (int t = 0; t + 1 <= model.m_max(); ++t) {
      const double d1 = e[static_cast<std::size_t>(t) + 1] - e[static_cast<std::size_t>(t)];
      if (d1 < rep.worst_monotone_violation) rep.worst_monotone_violation = d1;
      if (d1 < -1e-12) rep.monotone = false;
      if (t + 2 <= model.m_max()) {
        const double d2 = e[static_cast<std::size_t>(t) + 2] - 2 * e[static_cast<std::size_t>(t) + 1] +
                          e[static_cast<std::size_t>(t)];
        if (d2 > rep.worst_concavity_violation) rep.worst_concavity_violation = d2;
        if (d2 > tolerance) rep.concave = false;
        if (d2 > worst || -d1 > worst) {
          worst = std::max(d2, -d1);
          rep.worst_rank = r;
          rep.worst_t = t;
        }
      }
    }
  }
  return rep;
}

}  // namespace batsnum
