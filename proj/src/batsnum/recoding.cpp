#include "batsnum/recoding.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "batsnum/errors.hpp"

namespace batsnum {

double average_packets(const RecodingPolicy& policy, const RankDistribution& h) {
  if (policy.is_nonadaptive()) return policy.m() * h.sum();
  const Matrix& p = policy.p();
  if (p.rows() != h.size()) throw ParameterError("policy and rank distribution disagree on M");
  double s = 0.0;
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    if (h(r) == 0.0) continue;
    double mr = 0.0;
    for (Eigen::Index m = 1; m < p.cols(); ++m) mr += static_cast<double>(m) * p(r, m);
    s += h(r) * mr;
  }
  return s;
}

Matrix average_packets_gradient(const RankDistribution& h, int cols) {
  Matrix g(h.size(), cols);
  for (Eigen::Index r = 0; r < h.size(); ++r)
    for (int m = 0; m < cols; ++m) g(r, m) = m * h(r);
  return g;
}

RecodingPolicy expand_almost_deterministic(const std::vector<double>& t, int M0) {
  if (t.empty()) throw ParameterError("empty almost-deterministic specification");
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(t.size()), M0 + 1);
  for (std::size_t r = 0; r < t.size(); ++r) {
    const double v = t[r];
    if (!(v >= 0.0) || v > M0 + 1e-12)
      throw ParameterError("t(" + std::to_string(r) + ") = " + std::to_string(v) +
                           " outside [0, M0=" + std::to_string(M0) + "]");
    const double fl = std::min<double>(std::floor(v), M0);
    const double frac = std::max(0.0, v - fl);
    const auto lo = static_cast<Eigen::Index>(fl);
    const auto rr = static_cast<Eigen::Index>(r);
    if (frac > 0.0 && lo < M0) {
      p(rr, lo) = 1.0 - frac;
      p(rr, lo + 1) = frac;
    } else {
      p(rr, lo) = 1.0;
    }
  }
  return RecodingPolicy::adaptive(std::move(p));
}

std::vector<double> mean_packets_per_rank(const RecodingPolicy& policy, int M) {
  std::vector<double> t(static_cast<std::size_t>(M) + 1, 0.0);
  for (int r = 0; r <= M; ++r) {
    double s = 0.0;
    for (int m = 0; m <= policy.max_support(); ++m) s += m * policy.prob(m, r);
    t[static_cast<std::size_t>(r)] = s;
  }
  return t;
}

bool is_almost_deterministic(const RecodingPolicy& policy, double tol) {
  if (policy.is_nonadaptive()) return true;
  const Matrix& p = policy.p();
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    Eigen::Index first = -1, last = -1;
    for (Eigen::Index m = 0; m < p.cols(); ++m)
      if (p(r, m) > tol) {
        if (first < 0) first = m;
        last = m;
      }
    if (last - first > 1) return false;
  }
  return true;
}

HopOptimum optimize_hop(const RankDistribution& h_in, const HopKernel& kernel, double budget,
                        bool check_concavity) {
  const int M = kernel.M();
  const int M0 = kernel.m_cap();
  if (h_in.size() != M + 1) throw ParameterError("rank distribution does not match M");
  if (!(budget >= 0.0)) throw ParameterError("budget must be nonnegative");

  HopOptimum out;
  std::vector<int> units(static_cast<std::size_t>(M) + 1, 0);
  out.t.assign(static_cast<std::size_t>(M) + 1, 0.0);
  double remaining = budget;
  constexpr double mass_floor = 1e-300;

  // Best marginal gain E_r(t+1) - E_r(t) among fundable ranks; ties go to the
  // lower rank because the scan is ascending with strict comparison.
  auto best_rank = [&]() {
    int best = -1;
    double gain = -1.0;
    for (int r = 1; r <= M; ++r) {
      if (h_in(r) <= mass_floor) continue;
      const int t = units[static_cast<std::size_t>(r)];
      if (t >= M0) continue;
      const double g = kernel.expected_rank(r, t + 1) - kernel.expected_rank(r, t);
      if (g > gain) {
        gain = g;
        best = r;
      }
    }
    return best;
  };

  while (remaining > 0.0) {
    const int r = best_rank();
    if (r < 0) break;
    const double cost = h_in(r);
    auto& t = units[static_cast<std::size_t>(r)];
    if (cost <= remaining * (1.0 + 1e-15)) {
      ++t;
      out.t[static_cast<std::size_t>(r)] = t;
      remaining -= cost;
      if (remaining < 1e-15 * std::max(1.0, budget)) remaining = 0.0;
    } else {
      out.t[static_cast<std::size_t>(r)] = t + remaining / cost;
      remaining = 0.0;
    }
  }
  out.unused_budget = remaining;
  out.policy = expand_almost_deterministic(out.t, M0);
  const Matrix P = transition_matrix(out.policy, kernel);
  out.expected_rank = expected_rank(h_in * P);

  if (check_concavity) {
    for (int r = 1; r <= M && !out.concavity_warning; ++r) {
      if (h_in(r) <= mass_floor) continue;
      for (int t = 0; t + 2 <= M0; ++t) {
        const double d2 = kernel.expected_rank(r, t + 2) - 2 * kernel.expected_rank(r, t + 1) +
                          kernel.expected_rank(r, t);
        if (d2 > 1e-6) {
          out.concavity_warning = true;
          break;
        }
      }
    }
  }
  return out;
}

std::vector<double> project_simplex(const std::vector<double>& v) {
  // Sort-based projection: find the threshold theta with
  // sum max(v_i - theta, 0) = 1.
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumsum += u[i];
    const double candidate = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

Matrix project_stochastic(const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    if (r == 0) {
      out.row(0).setZero();
      out(0, 0) = 1.0;
      continue;
    }
    std::vector<double> row(static_cast<std::size_t>(a.cols()));
    for (Eigen::Index m = 0; m < a.cols(); ++m) row[static_cast<std::size_t>(m)] = a(r, m);
    const auto proj = project_simplex(row);
    for (Eigen::Index m = 0; m < a.cols(); ++m) out(r, m) = proj[static_cast<std::size_t>(m)];
  }
  return out;
}

}  // namespace batsnum
