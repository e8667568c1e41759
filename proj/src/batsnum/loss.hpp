#pragma once

#include <cstdint>
#include <vector>

#include "batsnum/rng.hpp"

namespace batsnum {

// q(r|m): probability that r of m transmitted packets of a batch arrive.
class BatchLossModel {
 public:
  BatchLossModel() = default;
  // rows[m][r] for r = 0..m. Throws ParameterError unless every row is a
  // probability vector (sum within 1e-9) and q(0|0) = 1.
  explicit BatchLossModel(std::vector<std::vector<double>> rows);

  int m_max() const { return static_cast<int>(rows_.size()) - 1; }
  double q(int r, int m) const {
    return r > m ? 0.0 : rows_[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)];
  }
  const std::vector<double>& row(int m) const { return rows_.at(static_cast<std::size_t>(m)); }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  friend bool operator==(const BatchLossModel&, const BatchLossModel&) = default;

 private:
  std::vector<std::vector<double>> rows_;
};

BatchLossModel independent_loss_model(double eps, int m_max);

struct GEParams {
  double s_G = 1.0;
  double s_B = 0.0;
  double p_GB = 0.5;
  double p_BG = 0.5;

  double pi_G() const { return p_BG / (p_GB + p_BG); }
  double pi_B() const { return 1.0 - pi_G(); }
  double loss_rate() const { return 1.0 - pi_G() * s_G - pi_B() * s_B; }
  void validate() const;

  friend bool operator==(const GEParams&, const GEParams&) = default;
};

// The three bursty channels used for average loss rates 0.1, 0.2 and 0.4.
GEParams ge_preset_for_loss(double loss_rate);

class GEChannel {
 public:
  enum class State { good, bad };

  GEChannel(GEParams params, State initial) : params_(params), state_(initial) {
    params_.validate();
  }
  // Initial state drawn from the stationary distribution.
  static GEChannel steady(GEParams params, Rng& rng);

  struct Step {
    bool received;
    State next_state;
  };
  // Delivers one packet in the current state, then moves the chain.
  Step step(Rng& rng);

  State state() const { return state_; }
  const GEParams& params() const { return params_; }

 private:
  GEParams params_;
  State state_;
};

struct LossSpec {
  enum class Kind { independent, gilbert_elliott };
  Kind kind = Kind::independent;
  double eps = 0.0;  // used by independent
  GEParams ge{};     // used by gilbert_elliott

  static LossSpec independent(double e) { return {Kind::independent, e, {}}; }
  static LossSpec gilbert_elliott(GEParams p) {
    return {Kind::gilbert_elliott, p.loss_rate(), p};
  }
  // Average packet loss rate for either kind.
  double loss_rate() const {
    return kind == Kind::independent ? eps : ge.loss_rate();
  }
  void validate() const;

  friend bool operator==(const LossSpec&, const LossSpec&) = default;
};

enum class Estimator {
  // `samples` independent bursts per m, each started from the stationary
  // state distribution.
  independent_bursts,
  // One stationary chain of samples*m_max packets read cyclically; row m is
  // the histogram over every length-m window. The estimate is itself a
  // stationary process, so E_r(t) is exactly concave.
  stationary_windows,
};

BatchLossModel empirical_loss_model(const LossSpec& spec, int m_max = 100,
                                    int samples = 10000, std::uint64_t seed = 1,
                                    Estimator estimator = Estimator::stationary_windows);

// Exact q(r|m) for a GE channel started in its stationary distribution
// (forward recursion over the hidden state).
BatchLossModel ge_exact_loss_model(const GEParams& params, int m_max);

// F(i|t) = sum_{j>=i} q(j|t).
double complementary_cdf(const BatchLossModel& model, int i, int t);

struct MonotoneConcaveReport {
  bool monotone = true;
  bool concave = true;
  // Most negative first difference E_r(t+1)-E_r(t) (0 when none negative).
  double worst_monotone_violation = 0.0;
  // Largest second difference (0 when none positive).
  double worst_concavity_violation = 0.0;
  int worst_rank = -1;
  int worst_t = -1;
};

// Checks E_r(t) for r = 1..M, t = 0..m_max under uniform random recoding.
MonotoneConcaveReport check_monotone_concave(const BatchLossModel& model, int M,
                                             int q_field, double tolerance = 1e-6);

}  // namespace batsnum
