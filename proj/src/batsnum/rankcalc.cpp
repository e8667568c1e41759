#include "batsnum/rankcalc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "batsnum/errors.hpp"

namespace batsnum {

double zeta(int i, int k, int j, int q) {
  if (i < 0 || k < 0 || j < 0 || q < 2) throw ParameterError("zeta: bad arguments");
  if (j > std::min(i, k)) return 0.0;
  // q^{-(i-j)(k-j)} * prod_{t<j} (1-q^{t-i})(1-q^{t-k}) / (1-q^{t-j}),
  // the closed form with q^{ik} divided through so nothing overflows.
  const double lq = std::log(static_cast<double>(q));
  double value = std::exp(-static_cast<double>(i - j) * static_cast<double>(k - j) * lq);
  for (int t = 0; t < j; ++t) {
    const double a = -std::expm1(static_cast<double>(t - i) * lq);
    const double b = -std::expm1(static_cast<double>(t - k) * lq);
    const double c = -std::expm1(static_cast<double>(t - j) * lq);
    value *= a * b / c;
  }
  return value;
}

ZetaTable::ZetaTable(int q, int max_i, int max_k)
    : q_(q), max_i_(max_i), max_k_(max_k), width_(std::min(max_i, max_k) + 1) {
  table_.assign(static_cast<std::size_t>(max_i + 1) * static_cast<std::size_t>(max_k + 1) *
                    static_cast<std::size_t>(width_),
                0.0);
  for (int i = 0; i <= max_i; ++i)
    for (int k = 0; k <= max_k; ++k)
      for (int j = 0; j <= std::min(i, k); ++j)
        table_[(static_cast<std::size_t>(i) * static_cast<std::size_t>(max_k + 1) +
                static_cast<std::size_t>(k)) *
                   static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(j)] = zeta(i, k, j, q);
}

double ZetaTable::operator()(int i, int k, int j) const {
  if (i > max_i_ || k > max_k_) return zeta(i, k, j, q_);
  if (j < 0 || j > std::min(i, k)) return 0.0;
  return table_[(static_cast<std::size_t>(i) * static_cast<std::size_t>(max_k_ + 1) +
                 static_cast<std::size_t>(k)) *
                    static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(j)];
}

HopKernel::HopKernel(const BatchLossModel& model, int q, int M, int m_cap)
    : M_(M), m_cap_(m_cap), q_(q), stride_(static_cast<std::size_t>(M) + 1) {
  if (M < 0 || m_cap < 0) throw ParameterError("kernel dimensions must be nonnegative");
  if (m_cap > model.m_max())
    throw ParameterError("loss model covers m <= " + std::to_string(model.m_max()) +
                         " but kernel needs " + std::to_string(m_cap));
  const ZetaTable z(q, M, m_cap);
  data_.assign(static_cast<std::size_t>(m_cap + 1) * stride_ * stride_, 0.0);
  expected_.assign(static_cast<std::size_t>(m_cap + 1) * stride_, 0.0);
  for (int m = 0; m <= m_cap; ++m) {
    for (int i = 0; i <= M; ++i) {
      double* row = data_.data() + (static_cast<std::size_t>(m) * stride_ + static_cast<std::size_t>(i)) * stride_;
      for (int k = 0; k <= m; ++k) {
        const double qk = model.q(k, m);
        if (qk == 0.0) continue;
        for (int j = 0; j <= std::min(i, k); ++j) row[j] += qk * z(i, k, j);
      }
      double e = 0.0;
      for (int j = 0; j <= M; ++j) e += j * row[j];
      expected_[static_cast<std::size_t>(m) * stride_ + static_cast<std::size_t>(i)] = e;
    }
  }
}

Matrix HopKernel::nonadaptive_matrix(int m) const {
  if (m < 0 || m > m_cap_) throw ParameterError("recoding number " + std::to_string(m) + " outside kernel");
  Matrix P(M_ + 1, M_ + 1);
  for (int i = 0; i <= M_; ++i)
    for (int j = 0; j <= M_; ++j) P(i, j) = at(m, i, j);
  return P;
}

double expected_rank_after_hop(int r, int t, const BatchLossModel& model, int q) {
  if (t < 0 || t > model.m_max())
    throw ParameterError("t=" + std::to_string(t) + " outside [0, m_max]");
  if (r < 0) throw ParameterError("rank must be nonnegative");
  double e = 0.0;
  for (int k = 0; k <= t; ++k) {
    const double qk = model.q(k, t);
    if (qk == 0.0) continue;
    double ek = 0.0;
    for (int j = 1; j <= std::min(r, k); ++j) ek += j * zeta(r, k, j, q);
    e += qk * ek;
  }
  return e;
}

RankDistribution point_mass(int M, int r) {
  RankDistribution h = RankDistribution::Zero(M + 1);
  h(r) = 1.0;
  return h;
}

double expected_rank(const RankDistribution& h) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i) e += static_cast<double>(i) * h(i);
  return e;
}

Matrix transition_matrix(const RecodingPolicy& policy, const HopKernel& kernel) {
  const int M = kernel.M();
  if (policy.max_support() > kernel.m_cap())
    throw ParameterError("policy support " + std::to_string(policy.max_support()) +
                         " exceeds loss model coverage " + std::to_string(kernel.m_cap()));
  if (policy.is_nonadaptive()) return kernel.nonadaptive_matrix(policy.m());
  const Matrix& p = policy.p();
  if (p.rows() != M + 1) throw ParameterError("policy rank dimension does not match M");
  Matrix P = Matrix::Zero(M + 1, M + 1);
  for (int i = 0; i <= M; ++i) {
    for (Eigen::Index m = 0; m < p.cols(); ++m) {
      const double w = p(i, m);
      if (w == 0.0) continue;
      const double* row = kernel.row_ptr(static_cast<int>(m), i);
      for (int j = 0; j <= i; ++j) P(i, j) += w * row[j];
    }
  }
  return P;
}

Matrix transition_matrix(const RecodingPolicy& policy, const BatchLossModel& model, int q,
                         int M) {
  const int cap = policy.max_support();
  return transition_matrix(policy, HopKernel(model, q, M, cap));
}

namespace {

int sample_index(const std::vector<double>& probs, double u) {
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return static_cast<int>(k);
  }
  for (std::size_t k = probs.size(); k-- > 0;)
    if (probs[k] > 0.0) return static_cast<int>(k);
  return 0;
}

}  // namespace

Matrix systematic_transition_matrix(const RecodingPolicy& policy,
                                    const BatchLossModel& model, Field field, int M,
                                    int samples, std::uint64_t seed) {
  if (samples < 1) throw ParameterError("samples must be at least 1");
  if (policy.max_support() > model.m_max())
    throw ParameterError("policy support exceeds loss model coverage");
  Rng rng(seed);
  Matrix P = Matrix::Zero(M + 1, M + 1);
  const auto dim = static_cast<std::size_t>(M);
  std::vector<int> order;
  for (int i = 0; i <= M; ++i) {
    // Any basis of the received space gives the same statistics; use e_0..e_{i-1}.
    RowSpace received(field, dim);
    for (int b = 0; b < i; ++b) {
      std::vector<Element> e(dim, 0);
      e[static_cast<std::size_t>(b)] = 1;
      received.insert(e);
    }
    std::vector<double> pm(static_cast<std::size_t>(policy.max_support()) + 1);
    for (std::size_t m = 0; m < pm.size(); ++m) pm[m] = policy.prob(static_cast<int>(m), i);
    for (int s = 0; s < samples; ++s) {
      const int m = sample_index(pm, rng.uniform());
      std::vector<std::vector<Element>> sent;
      sent.reserve(static_cast<std::size_t>(m));
      for (int t = 0; t < m; ++t) {
        if (t < i)
          sent.push_back(received.innovative()[static_cast<std::size_t>(t)]);
        else
          sent.push_back(received.random_combination(rng));
      }
      const int k = sample_index(model.row(m), rng.uniform());
      // With a uniform transmit permutation the delivered set is a uniform
      // k-subset of the sent packets; partial Fisher-Yates picks it.
      order.resize(static_cast<std::size_t>(m));
      std::iota(order.begin(), order.end(), 0);
      RowSpace next(field, dim);
      for (int t = 0; t < k; ++t) {
        const auto pick = static_cast<std::size_t>(t) +
                          static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(m - t)));
        std::swap(order[static_cast<std::size_t>(t)], order[pick]);
        next.insert(sent[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])]);
      }
      P(i, static_cast<Eigen::Index>(next.rank())) += 1.0;
    }
    P.row(i) /= static_cast<double>(samples);
  }
  return P;
}

Propagation propagate(const RankDistribution& h0, const std::vector<Matrix>& path) {
  RankDistribution h = h0;
  for (std::size_t l = 0; l < path.size(); ++l) {
    if (path[l].rows() != h.size() || path[l].cols() != h.size())
      throw ParameterError("transition matrix " + std::to_string(l) + " has the wrong dimension");
    h = h * path[l];
  }
  return {h, expected_rank(h)};
}

Matrix gradient_expected_rank(const RankDistribution& h0, const std::vector<Matrix>& path,
                              std::size_t l, const HopKernel& kernel, int cols) {
  if (l >= path.size()) throw ParameterError("hop index out of range");
  if (cols - 1 > kernel.m_cap()) throw ParameterError("gradient width exceeds kernel");
  const int M = kernel.M();
  RankDistribution up = h0;
  for (std::size_t t = 0; t < l; ++t) up = up * path[t];
  Vector down(M + 1);
  for (int j = 0; j <= M; ++j) down(j) = j;
  for (std::size_t t = path.size(); t-- > l + 1;) down = path[t] * down;
  Matrix g = Matrix::Zero(M + 1, cols);
  for (int r = 0; r <= M; ++r) {
    if (up(r) == 0.0) continue;
    for (int m = 0; m < cols; ++m) {
      const double* row = kernel.row_ptr(m, r);
      double s = 0.0;
      for (int j = 0; j <= r; ++j) s += row[j] * down(j);
      g(r, m) = up(r) * s;
    }
  }
  return g;
}

double cutset_bound(double M, const std::vector<std::pair<double, double>>& per_edge) {
  double b = M;
  for (const auto& [mbar, eps] : per_edge) {
    if (mbar < 0.0 || !(eps >= 0.0 && eps < 1.0))
      throw ParameterError("cutset_bound: invalid edge parameters");
    b = std::min(b, mbar * (1.0 - eps));
  }
  return b;
}

double path_expected_rank(const std::vector<const HopKernel*>& kernels,
                          const std::vector<int>& m) {
  if (kernels.empty()) throw ParameterError("empty path");
  if (kernels.size() != m.size()) throw ParameterError("one recoding number per hop required");
  const int M = kernels.front()->M();
  // Row vector times K_m, exploiting lower-triangular structure.
  std::vector<double> h(static_cast<std::size_t>(M) + 1, 0.0), next(h.size());
  h[static_cast<std::size_t>(M)] = 1.0;
  for (std::size_t l = 0; l < kernels.size(); ++l) {
    if (m[l] < 0 || m[l] > kernels[l]->m_cap())
      throw ParameterError("recoding number outside kernel range");
    if (l + 1 == kernels.size()) {
      double e = 0.0;
      for (int i = 0; i <= M; ++i)
        if (h[static_cast<std::size_t>(i)] != 0.0) e += h[static_cast<std::size_t>(i)] * kernels[l]->expected_rank(i, m[l]);
      return e;
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i <= M; ++i) {
      const double hi = h[static_cast<std::size_t>(i)];
      if (hi == 0.0) continue;
      const double* row = kernels[l]->row_ptr(m[l], i);
      for (int j = 0; j <= i; ++j) next[static_cast<std::size_t>(j)] += hi * row[j];
    }
    std::swap(h, next);
  }
  return 0.0;
}

}  // namespace batsnum
