#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "batsnum/loss.hpp"
#include "batsnum/netmodel.hpp"
#include "batsnum/rankcalc.hpp"

namespace batsnum {

struct Flow {
  std::string name;
  std::vector<int> links;  // indices into Network::links, source to sink
  int M = 16;

  friend bool operator==(const Flow&, const Flow&) = default;
};

enum class FixedPolicyMethod { barrier, subgradient };

struct SolverOptions {
  // Dual subgradient loop for the nonadaptive problem.
  double step_a = 10.0;  // gamma_t = step_a / (step_b + t)
  double step_b = 10.0;
  int dual_iterations = 5000;
  double dual_tolerance = 1e-5;  // max multiplier change
  double local_search_threshold = 1e-9;
  // Start each flow subproblem from the previous iterate (else from the
  // initial recoding numbers).
  bool warm_start = true;
  // Fraction of the final dual iterates whose recoding vectors are tried in
  // the feasibility recovery.
  double recovery_tail = 0.1;
  bool recovery_polish = true;

  // Problems with fixed policies (recovery, upper bound).
  FixedPolicyMethod fixed_method = FixedPolicyMethod::barrier;
  double barrier_gap = 1e-11;
  int subgradient_iterations = 20000;

  // Two-step eta search.
  double eta_min = 1.0;
  double eta_max = 3.0;
  double eta_step = 0.01;
  double eta_tolerance = 1e-4;

  // Primal-dual refinement.
  int pd_iterations = 200;
  double pd_step = 0.05;  // beta_t = pd_step / sqrt(1 + t), on the max-normalized gradient

  friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

enum class LossFamily { iid, ge };

struct Scenario {
  std::string name;
  Network network;
  InterferenceKind interference = InterferenceKind::two_hop;
  std::vector<Flow> flows;
  int q = 256;
  int m0_factor = 10;  // M0 = m0_factor * M
  // Empirical estimation of bursty links.
  int loss_m_max = 100;
  int loss_samples = 10000;
  Estimator estimator = Estimator::stationary_windows;
  std::uint64_t seed = 1;
  SolverOptions solver;

  int M0(const Flow& f) const { return m0_factor * f.M; }
  // Fills network.interference from `interference` unless explicit.
  void apply_interference();
  // Throws ValidationError with a field path.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Table-I style presets "case1" .. "case11" on the 9-node, 8-link line.
Scenario preset_scenario(const std::string& name, LossFamily family = LossFamily::iid);
std::vector<std::string> preset_names();

// A validated scenario with loss models, kernels and schedules built.
class Instance {
 public:
  explicit Instance(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  const Network& network() const { return scenario_.network; }
  const std::vector<Flow>& flows() const { return scenario_.flows; }
  const std::vector<Schedule>& schedules() const { return schedules_; }
  const std::vector<std::vector<double>>& schedule_rates() const { return schedule_rates_; }

  const BatchLossModel& loss_model(int link) const { return *loss_models_[static_cast<std::size_t>(link)]; }
  double loss_rate(int link) const;
  const HopKernel& kernel(std::size_t flow, std::size_t hop) const {
    return *kernels_[flow][hop];
  }
  std::vector<const HopKernel*> path_kernels(std::size_t flow) const;

 private:
  Scenario scenario_;
  std::vector<Schedule> schedules_;
  std::vector<std::vector<double>> schedule_rates_;
  std::vector<std::shared_ptr<const BatchLossModel>> loss_models_;
  std::vector<std::vector<std::shared_ptr<const HopKernel>>> kernels_;
};

}  // namespace batsnum
